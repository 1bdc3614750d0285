#pragma once

#include <cstdint>
#include <vector>

#include "otfslab/types.hpp"

namespace otfslab {

// Peak-to-average power ratio of a discrete waveform, linear scale.
// Throws for empty or all-zero input.
double papr(const CVec& s);

// Tail approximation Pr(PAPR > gamma) = 1 - (1 - e^-gamma)^n for a block of
// n independent samples.
double ccdf_analytic(double gamma_linear, std::size_t n_samples);
// Inverse of the above: the threshold (linear) where the analytic CCDF
// crosses probability p.
double ccdf_analytic_inverse(double p, std::size_t n_samples);

struct PaprResult {
    std::vector<double> per_frame_papr;     // linear
    std::vector<double> ccdf_thresholds_db;  // 0.1 dB grid
    std::vector<double> ccdf_empirical;
    std::vector<double> ccdf_analytic;
    std::size_t samples_per_frame = 0;
};

// Empirical CCDF of the collected PAPR values on a 0.1 dB grid, with the
// analytic curve evaluated on the same grid.
PaprResult summarize_papr(std::vector<double> per_frame_papr, std::size_t samples_per_frame);

// Threshold (dB) where a non-increasing CCDF curve crosses `level`,
// log-linearly interpolated; NaN when the curve never reaches it.
double ccdf_crossing_db(const std::vector<double>& thresholds_db,
                        const std::vector<double>& ccdf, double level);

struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
    std::uint64_t frames = 0;
    double stderr_est = 0.0;  // binomial sqrt(p(1-p)/bits)
};

BerPoint make_ber_point(double snr_db, std::uint64_t bit_errors, std::uint64_t bits_total,
                        std::uint64_t frames);

}  // namespace otfslab
