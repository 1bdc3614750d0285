#include "otfslab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "otfslab/kernels.hpp"

namespace otfslab {

double papr(const CVec& s) {
    if (s.empty()) throw std::invalid_argument("papr: empty vector");
    double sum = 0.0, peak = 0.0;
    kern::active().power_sum_max(s.data(), s.size(), &sum, &peak);
    if (sum <= 0.0) throw std::invalid_argument("papr: all-zero vector");
    return peak / (sum / double(s.size()));
}

double ccdf_analytic(double gamma_linear, std::size_t n_samples) {
    if (gamma_linear <= 0.0 || n_samples < 1) {
        throw std::invalid_argument("ccdf_analytic: gamma must be > 0, n >= 1");
    }
    return 1.0 - std::pow(1.0 - std::exp(-gamma_linear), double(n_samples));
}

double ccdf_analytic_inverse(double p, std::size_t n_samples) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("ccdf inverse: p must be in (0,1)");
    // 1 - (1 - e^-g)^n = p  =>  g = -ln(1 - (1-p)^(1/n))
    const double q = std::pow(1.0 - p, 1.0 / double(n_samples));
    return -std::log(1.0 - q);
}

PaprResult summarize_papr(std::vector<double> per_frame_papr, std::size_t samples_per_frame) {
    if (per_frame_papr.empty()) throw std::invalid_argument("summarize_papr: no frames");
    PaprResult r;
    r.samples_per_frame = samples_per_frame;
    r.per_frame_papr = std::move(per_frame_papr);

    const double max_db =
        linear_to_db(*std::max_element(r.per_frame_papr.begin(), r.per_frame_papr.end()));
    const int n_bins = std::max(1, int(std::ceil(max_db / 0.1)) + 2);

    std::vector<double> sorted = r.per_frame_papr;
    std::sort(sorted.begin(), sorted.end());
    const double total = double(sorted.size());

    r.ccdf_thresholds_db.resize(n_bins);
    r.ccdf_empirical.resize(n_bins);
    r.ccdf_analytic.resize(n_bins);
    for (int i = 0; i < n_bins; ++i) {
        const double th_db = 0.1 * double(i);
        const double th = db_to_linear(th_db);
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), th);
        r.ccdf_thresholds_db[i] = th_db;
        r.ccdf_empirical[i] = double(sorted.end() - it) / total;
        r.ccdf_analytic[i] = ccdf_analytic(th, samples_per_frame);
    }
    return r;
}

double ccdf_crossing_db(const std::vector<double>& thresholds_db,
                        const std::vector<double>& ccdf, double level) {
    for (std::size_t i = 1; i < ccdf.size(); ++i) {
        if (ccdf[i - 1] >= level && ccdf[i] < level) {
            const double a = ccdf[i - 1], b = ccdf[i];
            if (b <= 0.0 || a <= 0.0) return thresholds_db[i - 1];
            // Interpolate in log-probability, where the tail is near-linear.
            const double t = (std::log(level) - std::log(a)) / (std::log(b) - std::log(a));
            return thresholds_db[i - 1] + t * (thresholds_db[i] - thresholds_db[i - 1]);
        }
    }
    return std::nan("");
}

BerPoint make_ber_point(double snr_db, std::uint64_t bit_errors, std::uint64_t bits_total,
                        std::uint64_t frames) {
    BerPoint p;
    p.snr_db = snr_db;
    p.bit_errors = bit_errors;
    p.bits_total = bits_total;
    p.frames = frames;
    p.ber = bits_total ? double(bit_errors) / double(bits_total) : 0.0;
    p.stderr_est = bits_total ? std::sqrt(p.ber * (1.0 - p.ber) / double(bits_total)) : 0.0;
    return p;
}

}  // namespace otfslab
