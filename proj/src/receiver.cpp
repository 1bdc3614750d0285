#include "otfslab/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace otfslab {

void warm_estimation_window(TapResponseCache& cache, const FrameLayout& layout) {
    const int half_dopp = layout.guard_doppler / 2;
    for (int dl = 0; dl <= layout.guard_delay; ++dl) {
        for (int dk = -half_dopp; dk <= half_dopp; ++dk) cache.ensure(dl, dk);
    }
}

EstimatedChannel estimate_channel(const DelayDopplerFrame& dd_rx, const FrameLayout& layout,
                                  double noise_variance, const TapResponseCache& cache) {
    if (noise_variance < 0.0) {
        throw std::invalid_argument("estimate_channel: negative noise variance");
    }
    const std::size_t m = layout.m_delay;
    const std::size_t n = layout.n_doppler;
    const double amp = layout.pilot_amplitude;
    EstimatedChannel est;
    est.threshold_used = std::max(3.0 * std::sqrt(noise_variance), 1e-8 * amp);

    const int half_dopp = layout.guard_doppler / 2;
    const std::uint32_t pilot_cell = std::uint32_t(layout.pilot_cell());
    for (int dl = 0; dl <= layout.guard_delay; ++dl) {
        for (int dk = -half_dopp; dk <= half_dopp; ++dk) {
            const std::size_t k = (layout.pilot_doppler + std::size_t(dk + int(n))) % n;
            const std::size_t l = (layout.pilot_delay + std::size_t(dl)) % m;
            const Complex y = dd_rx.at(k, l);
            if (std::abs(y) <= est.threshold_used) continue;
            const auto pr = cache.pilot_response(dl, dk, pilot_cell);
            est.taps.push_back({dl, dk, y / (amp * pr.phase)});
        }
    }

    double gain_power = 0.0;
    for (const auto& t : est.taps) gain_power += std::norm(t.gain);
    est.pilot_snr_est = noise_variance > 0.0
                            ? amp * amp * gain_power / noise_variance
                            : std::numeric_limits<double>::infinity();
    return est;
}

namespace {

// Scratch reused across iterations of one mp_detect call.
struct MpScratch {
    std::vector<Complex> edge_mean;    // H[d,c] * E{x_c} per edge
    std::vector<double> edge_var;      // per-edge variance contribution
    std::vector<Complex> mu;           // interference mean mu_{d,c} per edge
    std::vector<double> var;           // interference variance + noise floor
    std::vector<Complex> obs_sum;      // per-row sums of edge_mean
    std::vector<double> obs_var_sum;   // per-row sums of edge_var
    std::vector<double> loglik;        // per-column scratch, degree * order
    std::vector<double> logits;
};

// Pass (a): interference moments from the current beliefs. Everything reads
// the previous iteration's pmf, so edge order is irrelevant.
void compute_moments(const EffectiveMatrix& h, const Alphabet& alphabet,
                     const std::vector<double>& pmf, double noise_variance, MpScratch& ws) {
    const int order = alphabet.order();
    const auto& pts = alphabet.points();
    std::fill(ws.obs_sum.begin(), ws.obs_sum.end(), Complex{0.0, 0.0});
    std::fill(ws.obs_var_sum.begin(), ws.obs_var_sum.end(), 0.0);
    for (std::size_t d = 0; d < h.rows(); ++d) {
        for (const auto& e : h.row(d)) {
            const double* p = pmf.data() + std::size_t(e.edge) * order;
            Complex mean{0.0, 0.0};
            double pw = 0.0;
            for (int j = 0; j < order; ++j) {
                mean += p[j] * pts[j];
                pw += p[j] * std::norm(pts[j]);
            }
            const Complex me = e.val * mean;
            const double ve = std::max(0.0, pw * std::norm(e.val) - std::norm(me));
            ws.edge_mean[e.edge] = me;
            ws.edge_var[e.edge] = ve;
            ws.obs_sum[d] += me;
            ws.obs_var_sum[d] += ve;
        }
    }
    for (std::size_t d = 0; d < h.rows(); ++d) {
        for (const auto& e : h.row(d)) {
            ws.mu[e.edge] = ws.obs_sum[d] - ws.edge_mean[e.edge];
            ws.var[e.edge] = ws.obs_var_sum[d] - ws.edge_var[e.edge] + noise_variance;
        }
    }
}

}  // namespace

MpResult mp_detect(const CVec& y, const EffectiveMatrix& h, const Alphabet& alphabet,
                   const MpConfig& cfg, const MpObserver& observer) {
    if (cfg.noise_variance <= 0.0) {
        throw std::invalid_argument("mp_detect: noise variance must be > 0");
    }
    if (cfg.damping <= 0.0 || cfg.damping > 1.0) {
        throw std::invalid_argument("mp_detect: damping must be in (0, 1]");
    }
    if (y.size() != h.rows()) throw std::invalid_argument("mp_detect: y/H dimension mismatch");

    const int order = alphabet.order();
    const auto& pts = alphabet.points();
    const std::size_t edges = h.edge_count();

    std::vector<double> pmf(edges * order, 1.0 / order);
    std::vector<double> pmf_next(edges * order);

    std::size_t max_degree = 0;
    for (std::size_t c = 0; c < h.cols(); ++c) max_degree = std::max(max_degree, h.col(c).size());

    MpScratch ws;
    ws.edge_mean.resize(edges);
    ws.edge_var.resize(edges);
    ws.mu.resize(edges);
    ws.var.resize(edges);
    ws.obs_sum.resize(h.rows());
    ws.obs_var_sum.resize(h.rows());
    ws.loglik.resize(max_degree * order);
    ws.logits.resize(order);

    MpResult result;
    result.converged = false;
    int iter = 0;
    for (iter = 1; iter <= cfg.max_iter; ++iter) {
        compute_moments(h, alphabet, pmf, cfg.noise_variance, ws);

        double max_delta = 0.0;
        for (std::size_t c = 0; c < h.cols(); ++c) {
            const auto& col = h.col(c);
            const std::size_t deg = col.size();
            if (deg == 0) continue;
            // Log-likelihood of each candidate symbol at each connected
            // observation, then leave-one-out sums per outgoing edge.
            std::vector<double>& ll = ws.loglik;
            std::vector<double> total(order, 0.0);
            for (std::size_t t = 0; t < deg; ++t) {
                const auto& e = col[t];
                const Complex resid = y[e.row] - ws.mu[e.edge];
                const double inv_var = 1.0 / ws.var[e.edge];
                for (int j = 0; j < order; ++j) {
                    const double d2 = std::norm(resid - e.val * pts[j]);
                    const double v = -d2 * inv_var;
                    ll[t * order + j] = v;
                    total[j] += v;
                }
            }
            for (std::size_t t = 0; t < deg; ++t) {
                const auto& e = col[t];
                double best = -std::numeric_limits<double>::infinity();
                for (int j = 0; j < order; ++j) {
                    ws.logits[j] = total[j] - ll[t * order + j];
                    best = std::max(best, ws.logits[j]);
                }
                double norm_sum = 0.0;
                for (int j = 0; j < order; ++j) {
                    ws.logits[j] = std::exp(ws.logits[j] - best);
                    norm_sum += ws.logits[j];
                }
                const double inv_norm = 1.0 / norm_sum;
                double* p_old = pmf.data() + std::size_t(e.edge) * order;
                double* p_new = pmf_next.data() + std::size_t(e.edge) * order;
                for (int j = 0; j < order; ++j) {
                    const double fresh = ws.logits[j] * inv_norm;
                    p_new[j] = cfg.damping * fresh + (1.0 - cfg.damping) * p_old[j];
                    max_delta = std::max(max_delta, std::abs(p_new[j] - p_old[j]));
                }
            }
        }
        pmf.swap(pmf_next);

        if (observer) {
            BeliefState st;
            st.iteration = iter;
            st.alphabet_order = order;
            st.pmf = pmf;
            st.interference_mean = ws.mu;
            st.interference_var = ws.var;
            observer(st);
        }
        if (max_delta < cfg.conv_eps) {
            result.converged = true;
            break;
        }
    }
    result.iterations = std::min(iter, cfg.max_iter);

    // Final decision: full likelihood product (no leave-one-out) with
    // moments recomputed from the final beliefs.
    compute_moments(h, alphabet, pmf, cfg.noise_variance, ws);
    result.symbols.assign(h.cols(), 0);
    for (std::size_t c = 0; c < h.cols(); ++c) {
        const auto& col = h.col(c);
        std::vector<double> total(order, 0.0);
        for (const auto& e : col) {
            const Complex resid = y[e.row] - ws.mu[e.edge];
            const double inv_var = 1.0 / ws.var[e.edge];
            for (int j = 0; j < order; ++j) {
                total[j] -= std::norm(resid - e.val * pts[j]) * inv_var;
            }
        }
        int best = 0;
        for (int j = 1; j < order; ++j) {
            if (total[j] > total[best]) best = j;
        }
        result.symbols[c] = best;
    }
    return result;
}

std::vector<int> map_oracle(const CVec& y, const EffectiveMatrix& h, const Alphabet& alphabet) {
    if (y.size() != h.rows()) throw std::invalid_argument("map_oracle: y/H dimension mismatch");
    const std::size_t cols = h.cols();
    const int order = alphabet.order();
    const double log_space = double(cols) * std::log(double(order));
    if (log_space > std::log(1e6)) {
        throw std::invalid_argument("map_oracle: search space exceeds 1e6 candidates");
    }
    const auto& pts = alphabet.points();

    std::vector<int> idx(cols, 0);
    std::vector<int> best_idx(cols, 0);
    double best_cost = std::numeric_limits<double>::infinity();
    CVec x(cols);
    while (true) {
        for (std::size_t c = 0; c < cols; ++c) x[c] = pts[idx[c]];
        const CVec hx = h.multiply(x);
        double cost = 0.0;
        for (std::size_t d = 0; d < y.size(); ++d) cost += std::norm(y[d] - hx[d]);
        if (cost < best_cost) {
            best_cost = cost;
            best_idx = idx;
        }
        // Lexicographic odometer, last symbol fastest.
        std::size_t c = cols;
        while (c > 0) {
            --c;
            if (++idx[c] < order) break;
            idx[c] = 0;
            if (c == 0) return best_idx;
        }
    }
}

CVec ofdm_equalize(const CVec& y, const CVec& h_freq) {
    if (y.size() != h_freq.size()) throw std::invalid_argument("ofdm_equalize: size mismatch");
    CVec x(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (std::abs(h_freq[k]) <= 1e-12) {
            throw std::runtime_error("ofdm_equalize: singular subcarrier");
        }
        x[k] = y[k] / h_freq[k];
    }
    return x;
}

std::vector<std::uint8_t> demap(const CVec& symbols, const Alphabet& alphabet) {
    const int bits = alphabet.bits_per_symbol();
    std::vector<std::uint8_t> out;
    out.reserve(symbols.size() * bits);
    for (const Complex& s : symbols) {
        const std::uint32_t label = alphabet.labels()[alphabet.nearest(s)];
        for (int b = bits - 1; b >= 0; --b) out.push_back((label >> b) & 1u);
    }
    return out;
}

}  // namespace otfslab
