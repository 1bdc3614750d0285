#include "otfslab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "otfslab/waveforms.hpp"

namespace otfslab {

const char* waveform_name(Waveform w) { return w == Waveform::otfs ? "otfs" : "ofdm"; }

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("OTFSLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return unsigned(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

// Per-frame RNG stream id; unique per (waveform, point, frame) so schedules
// and worker counts cannot change the draw sequence.
std::uint64_t frame_stream(Waveform wf, std::size_t point, std::size_t frame, bool papr) {
    return (std::uint64_t(papr) << 62) | (std::uint64_t(wf == Waveform::ofdm) << 56) |
           (std::uint64_t(point) << 32) | std::uint64_t(frame);
}

struct FrameOutcome {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
};

CpConfig resolve_cp(const ExperimentConfig& cfg, Waveform wf) {
    CpConfig cp;
    cp.scope = wf == Waveform::otfs ? CpScope::per_otfs_frame : CpScope::per_ofdm_symbol;
    if (cfg.grid.cp_len >= 0) {
        cp.cp_len = std::size_t(cfg.grid.cp_len);
    } else if (wf == Waveform::otfs) {
        cp.cp_len = std::size_t(cfg.channel.max_delay());
    } else {
        cp.cp_len = cfg.grid.m_delay / 8;
    }
    return cp;
}

FrameLayout resolve_layout(const ExperimentConfig& cfg) {
    const auto& g = cfg.grid;
    const auto& p = cfg.pilot;
    const std::size_t kp = p.doppler_pos >= 0 ? std::size_t(p.doppler_pos) : g.n_doppler / 2;
    const std::size_t lp = p.delay_pos >= 0 ? std::size_t(p.delay_pos) : g.m_delay / 2;
    const double amp = p.amplitude > 0.0 ? p.amplitude : std::sqrt(10.0);
    const int gk = p.guard_doppler >= 0 ? p.guard_doppler : 2 * cfg.channel.max_abs_doppler();
    const int gl = p.guard_delay >= 0 ? p.guard_delay : cfg.channel.max_delay();
    return FrameLayout::make(g.m_delay, g.n_doppler, kp, lp, amp, gk, gl);
}

// Everything shared read-only by the frame workers of one (config, waveform)
// run: resolved geometry, alphabet, detector matrices and caches.
struct LinkContext {
    const ExperimentConfig& cfg;
    Waveform wf;
    Alphabet alphabet;
    CpConfig cp;
    std::size_t m, n, mn;
    DetectorKind det;

    // OTFS
    FrameLayout layout;                     // pilot mode
    std::vector<std::uint32_t> data_cells;  // pilot mode
    TapResponseCache cache;                 // pilot mode, prewarmed
    EffectiveMatrix h_perfect;              // perfect-CSI detector matrix

    // OFDM: per-slot one-tap gains of the slot-averaged channel; Doppler is
    // deliberately ignored by the equalizer (that is the baseline's flaw).
    std::vector<CVec> ofdm_gains;

    explicit LinkContext(const ExperimentConfig& c, Waveform w)
        : cfg(c),
          wf(w),
          alphabet(Alphabet::make(c.grid.alphabet_order)),
          cp(resolve_cp(c, w)),
          m(c.grid.m_delay),
          n(c.grid.n_doppler),
          mn(c.grid.m_delay * c.grid.n_doppler),
          det(c.detector),
          layout{},
          cache(c.grid.m_delay, c.grid.n_doppler, resolve_cp(c, w)) {
        if (det == DetectorKind::automatic) {
            det = wf == Waveform::otfs ? DetectorKind::mp : DetectorKind::one_tap;
        }
        validate();
        if (wf == Waveform::otfs) {
            if (cfg.csi == CsiMode::pilot) {
                layout = resolve_layout(cfg);
                data_cells = layout.data_cells();
                warm_estimation_window(cache, layout);
            } else {
                h_perfect = build_effective_matrix(cfg.channel, m, n, cp);
            }
        } else {
            build_ofdm_gains();
        }
    }

    void validate() const {
        const std::size_t max_delay = std::size_t(cfg.channel.max_delay());
        if (max_delay > cp.cp_len) {
            throw std::runtime_error("uncovered delay: channel spread exceeds the cyclic prefix");
        }
        if (wf == Waveform::ofdm) {
            if (cfg.csi == CsiMode::pilot) {
                throw std::runtime_error("pilot CSI is delay-Doppler estimation; OFDM runs with "
                                         "the true one-tap response");
            }
            if (det != DetectorKind::one_tap) {
                throw std::runtime_error("OFDM uses the one-tap detector");
            }
        } else if (det == DetectorKind::one_tap) {
            throw std::runtime_error("one-tap detector applies to OFDM only");
        }
        if (cfg.csi == CsiMode::pilot && wf == Waveform::otfs) {
            const auto lay = resolve_layout(cfg);
            if (lay.guard_delay < cfg.channel.max_delay() ||
                lay.guard_doppler < cfg.channel.max_abs_doppler()) {
                throw std::runtime_error("pilot guards do not cover the channel spread");
            }
        }
    }

    void build_ofdm_gains() {
        const auto ring_phase = [&](std::int64_t r) {
            const double ang = kTwoPi * double(r % std::int64_t(mn)) / double(mn);
            return Complex{std::cos(ang), std::sin(ang)};
        };
        ofdm_gains.resize(n);
        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t payload_start = s * (m + cp.cp_len) + cp.cp_len;
            // Slot-averaged tap gains.
            CVec taps_avg;
            std::vector<int> delays;
            for (const auto& t : cfg.channel.taps) {
                Complex acc{0.0, 0.0};
                for (std::size_t p = 0; p < m; ++p) {
                    const std::int64_t r =
                        std::int64_t(t.doppler) * std::int64_t(payload_start + p - t.delay);
                    acc += ring_phase(((r % std::int64_t(mn)) + std::int64_t(mn)));
                }
                taps_avg.push_back(t.gain * (acc / double(m)));
                delays.push_back(t.delay);
            }
            CVec h(m, Complex{0.0, 0.0});
            for (std::size_t sub = 0; sub < m; ++sub) {
                Complex acc{0.0, 0.0};
                for (std::size_t i = 0; i < taps_avg.size(); ++i) {
                    const double ang = -kTwoPi * double(delays[i]) * double(sub) / double(m);
                    acc += taps_avg[i] * Complex{std::cos(ang), std::sin(ang)};
                }
                h[sub] = acc;
            }
            ofdm_gains[s] = std::move(h);
        }
    }
};

std::uint64_t label_errors(std::uint32_t a, std::uint32_t b) {
    return std::uint64_t(__builtin_popcount(a ^ b));
}

void check_finite(const CVec& v, const char* where) {
    if (!all_finite(v)) {
        throw std::runtime_error(std::string("non-finite sample after ") + where);
    }
}

FrameOutcome run_otfs_frame(const LinkContext& lk, double noise_var, SeededRng& rng) {
    const auto& alph = lk.alphabet;
    const std::uint32_t mask = std::uint32_t(alph.order() - 1);
    const bool pilot = lk.cfg.csi == CsiMode::pilot;
    const std::size_t n_data = pilot ? lk.data_cells.size() : lk.mn;

    std::vector<std::uint32_t> tx_labels(n_data);
    CVec syms(n_data);
    for (std::size_t i = 0; i < n_data; ++i) {
        tx_labels[i] = std::uint32_t(rng.next_u64()) & mask;
        syms[i] = alph.map_label(tx_labels[i]);
    }

    DelayDopplerFrame dd = pilot ? build_pilot_frame(syms, lk.layout)
                                 : DelayDopplerFrame(lk.m, lk.n);
    if (!pilot) dd.data() = syms;

    CVec s = otfs_modulate(dd, lk.cp);
    s = apply_chain(s, lk.cfg.impairments, Side::tx, lk.m, rng);
    CVec r = apply_channel(s, lk.cfg.channel, lk.mn);
    r = awgn(r, noise_var, rng);
    r = apply_chain(r, lk.cfg.impairments, Side::rx, lk.m, rng);
    check_finite(r, "rx impairment chain");
    const DelayDopplerFrame dd_rx = otfs_demodulate(r, lk.m, lk.n, lk.cp);

    MpConfig mp = lk.cfg.mp;
    mp.noise_variance = noise_var > 0.0 ? noise_var : 1e-10;

    std::vector<int> decided;
    if (pilot) {
        const auto est = estimate_channel(dd_rx, lk.layout, noise_var, lk.cache);
        const EffectiveMatrix h_full = lk.cache.assemble(est.taps);
        CVec y = dd_rx.data();
        // Cancel the known pilot before detecting the data cells.
        for (const auto& e : h_full.col(std::uint32_t(lk.layout.pilot_cell()))) {
            y[e.row] -= lk.layout.pilot_amplitude * e.val;
        }
        const EffectiveMatrix h_data = h_full.select_columns(lk.data_cells);
        decided = lk.det == DetectorKind::map_oracle
                      ? map_oracle(y, h_data, alph)
                      : mp_detect(y, h_data, alph, mp).symbols;
    } else {
        decided = lk.det == DetectorKind::map_oracle
                      ? map_oracle(dd_rx.data(), lk.h_perfect, alph)
                      : mp_detect(dd_rx.data(), lk.h_perfect, alph, mp).symbols;
    }

    FrameOutcome out;
    out.bits = std::uint64_t(n_data) * std::uint64_t(alph.bits_per_symbol());
    for (std::size_t i = 0; i < n_data; ++i) {
        out.bit_errors += label_errors(tx_labels[i], alph.labels()[decided[i]]);
    }
    return out;
}

FrameOutcome run_ofdm_frame(const LinkContext& lk, double noise_var, SeededRng& rng) {
    const auto& alph = lk.alphabet;
    const std::uint32_t mask = std::uint32_t(alph.order() - 1);
    const std::size_t n_data = lk.mn;

    std::vector<std::uint32_t> tx_labels(n_data);
    for (auto& l : tx_labels) l = std::uint32_t(rng.next_u64()) & mask;

    CVec stream;
    stream.reserve(lk.n * (lk.m + lk.cp.cp_len));
    CVec row(lk.m);
    for (std::size_t slot = 0; slot < lk.n; ++slot) {
        for (std::size_t sub = 0; sub < lk.m; ++sub) {
            row[sub] = alph.map_label(tx_labels[slot * lk.m + sub]);
        }
        const CVec sym = ofdm_modulate(row, lk.cp);
        stream.insert(stream.end(), sym.begin(), sym.end());
    }

    stream = apply_chain(stream, lk.cfg.impairments, Side::tx, lk.m, rng);
    CVec r = apply_channel(stream, lk.cfg.channel, lk.mn);
    r = awgn(r, noise_var, rng);
    r = apply_chain(r, lk.cfg.impairments, Side::rx, lk.m, rng);
    check_finite(r, "rx impairment chain");

    FrameOutcome out;
    out.bits = std::uint64_t(n_data) * std::uint64_t(alph.bits_per_symbol());
    const std::size_t sym_len = lk.m + lk.cp.cp_len;
    for (std::size_t slot = 0; slot < lk.n; ++slot) {
        const CVec seg(r.begin() + slot * sym_len, r.begin() + (slot + 1) * sym_len);
        const CVec y = ofdm_demodulate(seg, lk.m, lk.cp);
        const CVec& h = lk.ofdm_gains[slot];
        for (std::size_t sub = 0; sub < lk.m; ++sub) {
            // Singular subcarriers are erased: decide from a zero sample.
            const Complex xhat = std::abs(h[sub]) > 1e-12 ? y[sub] / h[sub] : Complex{0.0, 0.0};
            const std::uint32_t rx_label = alph.labels()[alph.nearest(xhat)];
            out.bit_errors += label_errors(tx_labels[slot * lk.m + sub], rx_label);
        }
    }
    return out;
}

// Runs `frames` independent jobs over a worker pool; results land in
// per-frame slots, so aggregation order never depends on the worker count.
template <typename Fn>
void parallel_frames(std::size_t frames, unsigned threads, Fn&& per_frame) {
    const unsigned workers = std::min<std::size_t>(std::max(1u, threads), frames);
    if (workers <= 1) {
        for (std::size_t f = 0; f < frames; ++f) per_frame(f);
        return;
    }
    std::mutex err_mu;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            const std::size_t lo = frames * w / workers;
            const std::size_t hi = frames * (w + 1) / workers;
            try {
                for (std::size_t f = lo; f < hi; ++f) per_frame(f);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<BerPoint> run_ber_experiment(const ExperimentConfig& cfg, Waveform wf) {
    if (cfg.sweep.snr_db.empty() || cfg.sweep.frames_per_point == 0) {
        throw std::invalid_argument("ber experiment: empty sweep");
    }
    const LinkContext lk(cfg, wf);
    const unsigned threads = resolve_thread_count(cfg.threads);
    const std::size_t frames = cfg.sweep.frames_per_point;

    std::vector<BerPoint> points;
    points.reserve(cfg.sweep.snr_db.size());
    for (std::size_t pt = 0; pt < cfg.sweep.snr_db.size(); ++pt) {
        const double snr_db = cfg.sweep.snr_db[pt];
        // Unit mean symbol energy through a unitary modulator and a
        // normalized channel: Es/N0 == 1/sigma^2.
        const double noise_var = noise_variance_for_snr(snr_db, 1.0);
        std::vector<FrameOutcome> slots(frames);
        parallel_frames(frames, threads, [&](std::size_t f) {
            SeededRng rng(cfg.seed, frame_stream(wf, pt, f, false));
            slots[f] = wf == Waveform::otfs ? run_otfs_frame(lk, noise_var, rng)
                                            : run_ofdm_frame(lk, noise_var, rng);
        });
        std::uint64_t errors = 0, bits = 0;
        for (const auto& s : slots) {
            errors += s.bit_errors;
            bits += s.bits;
        }
        points.push_back(make_ber_point(snr_db, errors, bits, frames));
    }
    return points;
}

PaprResult run_papr_experiment(const ExperimentConfig& cfg, Waveform wf, std::size_t n_frames) {
    if (n_frames == 0) throw std::invalid_argument("papr experiment: needs frames");
    const Alphabet alph = Alphabet::make(cfg.grid.alphabet_order);
    const std::uint32_t mask = std::uint32_t(alph.order() - 1);
    const std::size_t m = cfg.grid.m_delay;
    const std::size_t n = cfg.grid.n_doppler;
    const std::size_t mn = m * n;
    const unsigned threads = resolve_thread_count(cfg.threads);

    std::vector<double> values(n_frames);
    parallel_frames(n_frames, threads, [&](std::size_t f) {
        SeededRng rng(cfg.seed, frame_stream(wf, 0, f, true));
        if (wf == Waveform::otfs) {
            DelayDopplerFrame dd(m, n);
            for (auto& z : dd.data()) z = alph.points()[rng.next_u64() & mask];
            values[f] = papr(otfs_modulate(dd, {0, CpScope::per_otfs_frame}));
        } else {
            CVec frame;
            frame.reserve(mn);
            CVec row(m);
            for (std::size_t slot = 0; slot < n; ++slot) {
                for (auto& z : row) z = alph.points()[rng.next_u64() & mask];
                const CVec sym = ofdm_modulate(row, {0, CpScope::per_ofdm_symbol});
                frame.insert(frame.end(), sym.begin(), sym.end());
            }
            values[f] = papr(frame);
        }
    });
    return summarize_papr(std::move(values), mn);
}

ChannelProbe probe_channel(const ExperimentConfig& cfg) {
    const std::size_t m = cfg.grid.m_delay;
    const std::size_t n = cfg.grid.n_doppler;
    const std::size_t mn = m * n;
    const CpConfig cp = resolve_cp(cfg, Waveform::otfs);
    const EffectiveMatrix h = build_effective_matrix(cfg.channel, m, n, cp);

    ChannelProbe probe;
    probe.dim = mn;
    probe.n_taps = cfg.channel.taps.size();
    probe.nnz = h.edge_count();
    probe.row_nnz_min = mn ? h.row(0).size() : 0;
    probe.row_nnz_max = probe.row_nnz_min;
    for (std::size_t d = 0; d < mn; ++d) {
        probe.row_nnz_min = std::min(probe.row_nnz_min, h.row(d).size());
        probe.row_nnz_max = std::max(probe.row_nnz_max, h.row(d).size());
    }

    SeededRng rng(cfg.seed, 0xC0FFEE);
    DelayDopplerFrame x(m, n);
    for (auto& z : x.data()) {
        auto [a, b] = rng.gaussian_pair();
        z = Complex{a, b} * std::sqrt(0.5);
    }
    const CVec via_matrix = h.multiply(x.data());
    const CVec via_pipe =
        otfs_demodulate(apply_channel(otfs_modulate(x, cp), cfg.channel, mn), m, n, cp).data();
    double acc = 0.0;
    for (std::size_t i = 0; i < mn; ++i) acc += std::norm(via_matrix[i] - via_pipe[i]);
    probe.consistency_residual = std::sqrt(acc);
    return probe;
}

}  // namespace otfslab
