#include "otfslab/impairments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "otfslab/kernels.hpp"

namespace otfslab {

Complex IqImbalance::alpha() const {
    return {std::cos(phase_rad), epsilon * std::sin(phase_rad)};
}

Complex IqImbalance::beta() const {
    return {epsilon * std::cos(phase_rad), -std::sin(phase_rad)};
}

CVec apply_cfo(const CVec& s, const CfoParams& p, std::size_t samples_per_symbol) {
    if (samples_per_symbol < 1) throw std::invalid_argument("cfo: samples_per_symbol >= 1");
    if (p.normalized_offset == 0.0) return s;
    const double dphi = kTwoPi * p.normalized_offset / double(samples_per_symbol);
    CVec ramp(s.size());
    // Phase is continuous over the whole stream; re-anchor the recurrence on
    // an exact sincos every chunk to keep rounding drift negligible.
    constexpr std::size_t kChunk = 64;
    const Complex step{std::cos(dphi), std::sin(dphi)};
    for (std::size_t base = 0; base < s.size(); base += kChunk) {
        Complex w{std::cos(dphi * double(base)), std::sin(dphi * double(base))};
        const std::size_t end = std::min(base + kChunk, s.size());
        for (std::size_t i = base; i < end; ++i) {
            ramp[i] = w;
            w *= step;
        }
    }
    CVec y(s.size());
    kern::active().cmul(y.data(), s.data(), ramp.data(), s.size());
    return y;
}

CVec apply_iq_imbalance(const CVec& s, const IqImbalance& p) {
    const Complex a = p.alpha();
    const Complex b = p.beta();
    CVec y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) y[i] = a * s[i] + b * std::conj(s[i]);
    return y;
}

CVec apply_dc_offset(const CVec& s, const DcOffset& p) {
    const Complex g{p.gamma_i, p.gamma_q};
    CVec y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) y[i] = s[i] + g;
    return y;
}

CVec apply_phase_noise(const CVec& s, const PhaseNoiseModel& p, SeededRng& rng) {
    if (p.sigma2 < 0.0) throw std::invalid_argument("phase noise: sigma2 must be >= 0");
    if (p.sigma2 == 0.0) return s;
    const double sigma = std::sqrt(p.sigma2);
    std::vector<double> theta(s.size(), 0.0);
    if (p.kind == PhaseNoiseKind::wiener) {
        double acc = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            acc += sigma * rng.gaussian();
            theta[i] = acc;
        }
    } else {
        if (p.filter_len < 1) throw std::invalid_argument("phase noise: filter_len >= 1");
        // White innovations smoothed by a moving average with coefficients
        // 1/filter_len (stationary, variance sigma2/filter_len).
        const std::size_t flen = p.filter_len;
        std::vector<double> w(s.size() + flen - 1);
        for (auto& x : w) x = sigma * rng.gaussian();
        const double inv = 1.0 / double(flen);
        for (std::size_t i = 0; i < s.size(); ++i) {
            double acc = 0.0;
            for (std::size_t t = 0; t < flen; ++t) acc += w[i + t];
            theta[i] = acc * inv;
        }
    }
    CVec y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        y[i] = s[i] * Complex{std::cos(theta[i]), std::sin(theta[i])};
    }
    return y;
}

CVec apply_saleh_pa(const CVec& s, const SalehPa& p) {
    if (p.beta_g <= 0.0 || p.beta_phi < 0.0) {
        throw std::invalid_argument("saleh: beta_g must be > 0 and beta_phi >= 0");
    }
    const double backoff = std::pow(10.0, -p.input_backoff_db / 20.0);
    CVec y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = std::abs(s[i]) * backoff;
        if (r == 0.0) {
            y[i] = {0.0, 0.0};
            continue;
        }
        const double g = p.alpha_g * r / (1.0 + p.beta_g * r * r);
        const double phi = p.alpha_phi * r * r / (1.0 + p.beta_phi * r * r);
        // g(r) e^{j(arg s + phi)} without an explicit atan2.
        y[i] = s[i] * (g / std::abs(s[i])) * Complex{std::cos(phi), std::sin(phi)};
    }
    return y;
}

CVec apply_sample_clock_offset(const CVec& s, const SampleClockOffset& p) {
    if (std::abs(p.delta_ratio) >= 0.01) {
        throw std::invalid_argument("sample clock offset: |delta_ratio| must be < 0.01");
    }
    if (p.delta_ratio == 0.0 || s.empty()) return s;
    CVec y(s.size());
    const double last = double(s.size() - 1);
    for (std::size_t n = 0; n < s.size(); ++n) {
        const double pos = double(n) * (1.0 + p.delta_ratio);
        if (pos >= last) {
            y[n] = s.back();
            continue;
        }
        const double fl = std::floor(pos);
        const std::size_t i = std::size_t(fl);
        const double frac = pos - fl;
        y[n] = s[i] + frac * (s[i + 1] - s[i]);
    }
    return y;
}

CVec apply_chain(const CVec& s, const ImpairmentChain& chain, Side side,
                 std::size_t samples_per_symbol, SeededRng& rng) {
    CVec y = s;
    for (const auto& stage : chain.stages) {
        if (stage.side != side) continue;
        y = std::visit(
            [&](const auto& model) -> CVec {
                using T = std::decay_t<decltype(model)>;
                if constexpr (std::is_same_v<T, CfoParams>) {
                    return apply_cfo(y, model, samples_per_symbol);
                } else if constexpr (std::is_same_v<T, IqImbalance>) {
                    return apply_iq_imbalance(y, model);
                } else if constexpr (std::is_same_v<T, DcOffset>) {
                    return apply_dc_offset(y, model);
                } else if constexpr (std::is_same_v<T, PhaseNoiseModel>) {
                    return apply_phase_noise(y, model, rng);
                } else if constexpr (std::is_same_v<T, SalehPa>) {
                    return apply_saleh_pa(y, model);
                } else {
                    return apply_sample_clock_offset(y, model);
                }
            },
            stage.model);
    }
    return y;
}

}  // namespace otfslab
