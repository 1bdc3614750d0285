#include "otfslab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "otfslab/kernels.hpp"
#include "otfslab/waveforms.hpp"

namespace otfslab {

ChannelProfile ChannelProfile::make(std::vector<ChannelTap> taps, bool normalize) {
    if (taps.empty()) throw std::invalid_argument("channel profile needs at least one tap");
    ChannelProfile p;
    p.taps = std::move(taps);
    p.normalize = normalize;
    if (normalize) {
        double pw = 0.0;
        for (const auto& t : p.taps) pw += std::norm(t.gain);
        if (pw <= 0.0) throw std::invalid_argument("cannot normalize an all-zero profile");
        const double s = 1.0 / std::sqrt(pw);
        for (auto& t : p.taps) t.gain *= s;
    }
    return p;
}

ChannelProfile ChannelProfile::from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<ChannelTap> taps;
    for (const auto& jt : j.at("taps")) {
        ChannelTap t;
        t.delay = jt.at("delay").get<int>();
        t.doppler = jt.at("doppler").get<int>();
        t.gain = {jt.at("gain_re").get<double>(), jt.at("gain_im").get<double>()};
        if (t.delay < 0) throw std::invalid_argument("channel tap delay must be >= 0");
        taps.push_back(t);
    }
    return make(std::move(taps), j.value("normalize", false));
}

ChannelProfile ChannelProfile::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel profile: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

ChannelProfile ChannelProfile::default_test_profile() {
    return make({{0, 0, {1.0, 0.0}}, {1, 1, {1.0, 0.0}}, {2, -1, {1.0, 0.0}}, {3, 2, {1.0, 0.0}}},
                /*normalize=*/true);
}

int ChannelProfile::max_delay() const {
    int d = 0;
    for (const auto& t : taps) d = std::max(d, t.delay);
    return d;
}

int ChannelProfile::max_abs_doppler() const {
    int k = 0;
    for (const auto& t : taps) k = std::max(k, std::abs(t.doppler));
    return k;
}

double ChannelProfile::total_power() const {
    double pw = 0.0;
    for (const auto& t : taps) pw += std::norm(t.gain);
    return pw;
}

namespace {

// Phasor ring e^(j 2 pi r / len) for r in [0, len). Shared across frames.
std::shared_ptr<const CVec> phasor_ring(std::size_t len) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const CVec>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[len];
    if (!slot) {
        auto ring = std::make_shared<CVec>(len);
        for (std::size_t r = 0; r < len; ++r) {
            const double ang = kTwoPi * double(r) / double(len);
            (*ring)[r] = {std::cos(ang), std::sin(ang)};
        }
        slot = std::move(ring);
    }
    return slot;
}

}  // namespace

CVec apply_channel(const CVec& s, const ChannelProfile& profile, std::size_t frame_len) {
    if (s.empty() || frame_len == 0 || s.size() < frame_len) {
        throw std::invalid_argument("apply_channel: stream shorter than the frame length");
    }
    const std::size_t prefix = s.size() - frame_len;
    const auto ring = phasor_ring(frame_len);
    CVec y(s.size(), Complex{0.0, 0.0});
    CVec ramp(s.size());
    const auto& kt = kern::active();
    for (const auto& tap : profile.taps) {
        if (tap.delay < 0 || std::size_t(tap.delay) > prefix) {
            throw std::runtime_error("apply_channel: uncovered delay");
        }
        // ramp[i] tracks the Doppler phase at offset i = n - l, reduced
        // exactly modulo frame_len before the table lookup.
        const std::int64_t k = tap.doppler;
        const std::int64_t len = std::int64_t(frame_len);
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::int64_t r = (k * std::int64_t(i)) % len;
            if (r < 0) r += len;
            ramp[i] = (*ring)[std::size_t(r)];
        }
        kt.cmul3_axpy(y.data() + tap.delay, tap.gain, s.data(), ramp.data(),
                      s.size() - std::size_t(tap.delay));
    }
    return y;
}

Complex EffectiveMatrix::at(std::size_t d, std::size_t c) const {
    for (const auto& e : rows_[d]) {
        if (e.col == c) return e.val;
    }
    return {0.0, 0.0};
}

CVec EffectiveMatrix::multiply(const CVec& x) const {
    if (x.size() != cols()) throw std::invalid_argument("effective matrix: size mismatch");
    CVec y(rows(), Complex{0.0, 0.0});
    for (std::size_t d = 0; d < rows_.size(); ++d) {
        Complex acc{0.0, 0.0};
        for (const auto& e : rows_[d]) acc += e.val * x[e.col];
        y[d] = acc;
    }
    return y;
}

EffectiveMatrix EffectiveMatrix::select_columns(const std::vector<std::uint32_t>& keep) const {
    std::vector<std::int64_t> remap(cols(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = std::int64_t(i);
    Builder b(rows(), keep.size());
    for (std::size_t d = 0; d < rows_.size(); ++d) {
        for (const auto& e : rows_[d]) {
            const std::int64_t nc = remap[e.col];
            if (nc >= 0) b.add(std::uint32_t(d), std::uint32_t(nc), e.val);
        }
    }
    return b.finalize(0.0);
}

void EffectiveMatrix::Builder::add(std::uint32_t row, std::uint32_t col, Complex v) {
    if (row >= rows_ || col >= cols_) throw std::invalid_argument("builder: index out of range");
    entries_[{row, col}] += v;
}

EffectiveMatrix EffectiveMatrix::Builder::finalize(double prune_below) {
    EffectiveMatrix m;
    m.rows_.resize(rows_);
    m.cols_.resize(cols_);
    std::uint32_t edge = 0;
    for (const auto& [rc, v] : entries_) {
        if (std::abs(v) <= prune_below) continue;
        const auto [r, c] = rc;
        m.rows_[r].push_back({c, edge, v});
        m.cols_[c].push_back({r, edge, v});
        ++edge;
    }
    m.edges_ = edge;
    return m;
}

EffectiveMatrix build_effective_matrix(const ChannelProfile& profile, std::size_t m_delay,
                                       std::size_t n_doppler, const CpConfig& cp) {
    const std::size_t mn = m_delay * n_doppler;
    EffectiveMatrix::Builder b(mn, mn);
    for (std::uint32_t c = 0; c < mn; ++c) {
        DelayDopplerFrame basis(m_delay, n_doppler);
        basis.data()[c] = Complex{1.0, 0.0};
        const CVec tx = otfs_modulate(basis, cp);
        const CVec rx = apply_channel(tx, profile, mn);
        const DelayDopplerFrame dd = otfs_demodulate(rx, m_delay, n_doppler, cp);
        for (std::uint32_t d = 0; d < mn; ++d) {
            const Complex v = dd.data()[d];
            if (std::abs(v) > 1e-9) b.add(d, c, v);
        }
    }
    return b.finalize();
}

void TapResponseCache::ensure(int delay, int doppler) {
    const auto key = std::make_pair(delay, doppler);
    if (cache_.count(key)) return;
    const auto profile =
        ChannelProfile::make({{delay, doppler, Complex{1.0, 0.0}}}, /*normalize=*/false);
    cache_[key] = std::make_shared<const EffectiveMatrix>(
        build_effective_matrix(profile, m_, n_, cp_));
}

const EffectiveMatrix& TapResponseCache::unit_response(int delay, int doppler) const {
    const auto it = cache_.find({delay, doppler});
    if (it == cache_.end()) {
        throw std::logic_error("tap response cache: tap not warmed");
    }
    return *it->second;
}

TapResponseCache::PilotResponse TapResponseCache::pilot_response(
    int delay, int doppler, std::uint32_t pilot_cell) const {
    const auto& col = unit_response(delay, doppler).col(pilot_cell);
    if (col.empty()) {
        throw std::logic_error("tap response cache: pilot column unexpectedly empty");
    }
    // A unit integer tap maps one cell to exactly one cell; take the
    // dominant entry in case of numerical dust.
    const EffectiveMatrix::ColEntry* best = &col[0];
    for (const auto& e : col) {
        if (std::abs(e.val) > std::abs(best->val)) best = &e;
    }
    return {best->row, best->val};
}

EffectiveMatrix TapResponseCache::assemble(const std::vector<ChannelTap>& taps) const {
    const std::size_t mn = m_ * n_;
    EffectiveMatrix::Builder b(mn, mn);
    for (const auto& tap : taps) {
        const auto& unit = unit_response(tap.delay, tap.doppler);
        for (std::size_t d = 0; d < mn; ++d) {
            for (const auto& e : unit.row(d)) {
                b.add(std::uint32_t(d), e.col, tap.gain * e.val);
            }
        }
    }
    return b.finalize();
}

double noise_variance_for_snr(double snr_db, double signal_power) {
    if (signal_power <= 0.0) {
        throw std::invalid_argument("noise_variance_for_snr: signal power must be > 0");
    }
    return signal_power / db_to_linear(snr_db);
}

}  // namespace otfslab
