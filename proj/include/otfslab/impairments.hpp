#pragma once

#include <variant>
#include <vector>

#include "otfslab/rng.hpp"
#include "otfslab/types.hpp"

namespace otfslab {

// Carrier frequency offset as a fraction of the subcarrier spacing.
struct CfoParams {
    double normalized_offset = 0.0;
};

// Gain/phase mismatch between the I and Q branches, y = alpha*x + beta*conj(x).
// alpha/beta are derived on demand so they can never go stale.
struct IqImbalance {
    double epsilon = 0.0;    // gain imbalance fraction (0.5 == 50 %)
    double phase_rad = 0.0;  // quadrature phase mismatch

    Complex alpha() const;
    Complex beta() const;
};

struct DcOffset {
    double gamma_i = 0.0;
    double gamma_q = 0.0;
};

enum class PhaseNoiseKind { filtered_gaussian, wiener };

struct PhaseNoiseModel {
    PhaseNoiseKind kind = PhaseNoiseKind::wiener;
    double sigma2 = 0.0;          // per-sample increment/innovation variance, rad^2
    std::size_t filter_len = 16;  // filtered_gaussian only
};

// Memoryless AM-AM/AM-PM amplifier:
//   g(r) = alpha_g r / (1 + beta_g r^2),  phi(r) = alpha_phi r^2 / (1 + beta_phi r^2).
// Default coefficients are the classical TWT fit commonly used with this
// model; they are a configuration default, not measured ground truth.
struct SalehPa {
    double alpha_g = 2.1587;
    double beta_g = 1.1517;
    double alpha_phi = 4.0033;
    double beta_phi = 9.1040;
    double input_backoff_db = 0.0;
};

// Receiver sampling period error deltaT/T; resampled by linear interpolation.
struct SampleClockOffset {
    double delta_ratio = 0.0;  // model valid for |delta_ratio| < 0.01
};

CVec apply_cfo(const CVec& s, const CfoParams& p, std::size_t samples_per_symbol);
CVec apply_iq_imbalance(const CVec& s, const IqImbalance& p);
CVec apply_dc_offset(const CVec& s, const DcOffset& p);
CVec apply_phase_noise(const CVec& s, const PhaseNoiseModel& p, SeededRng& rng);
CVec apply_saleh_pa(const CVec& s, const SalehPa& p);
CVec apply_sample_clock_offset(const CVec& s, const SampleClockOffset& p);

enum class Side { tx, rx };

using StageModel =
    std::variant<CfoParams, IqImbalance, DcOffset, PhaseNoiseModel, SalehPa, SampleClockOffset>;

struct ImpairmentStage {
    Side side = Side::rx;
    StageModel model;
};

// Ordered distortion chain; tx-side stages run before the channel, rx-side
// after, each side in list order.
struct ImpairmentChain {
    std::vector<ImpairmentStage> stages;

    bool empty() const { return stages.empty(); }
};

CVec apply_chain(const CVec& s, const ImpairmentChain& chain, Side side,
                 std::size_t samples_per_symbol, SeededRng& rng);

}  // namespace otfslab
