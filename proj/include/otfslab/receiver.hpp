#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "otfslab/channel.hpp"
#include "otfslab/frame.hpp"
#include "otfslab/qam.hpp"
#include "otfslab/types.hpp"

namespace otfslab {

struct EstimatedChannel {
    std::vector<ChannelTap> taps;
    double threshold_used = 0.0;
    double pilot_snr_est = 0.0;
};

// Threshold-based delay-Doppler channel estimation from the embedded pilot.
// Scans delay offsets [0, guard_delay] and Doppler offsets
// [-guard_doppler/2, guard_doppler/2] around the pilot (the half-width keeps
// channel-shifted data cells out of the scan window when the guards are sized
// at twice the Doppler spread). Cells above max(3*sqrt(noise_variance),
// 1e-8*pilot_amplitude) become taps; gains are phase-corrected with the
// probe-calibrated unit-tap response so the estimate matches the modem
// convention exactly. The needed cache entries must be warmed beforehand.
EstimatedChannel estimate_channel(const DelayDopplerFrame& dd_rx, const FrameLayout& layout,
                                  double noise_variance, const TapResponseCache& cache);

// Warm every cache entry estimate_channel may look up for this layout.
void warm_estimation_window(TapResponseCache& cache, const FrameLayout& layout);

struct MpConfig {
    double damping = 0.6;       // (0, 1]
    int max_iter = 30;
    double conv_eps = 1e-5;
    double noise_variance = 1.0;  // must be > 0
};

// Per-edge belief tables exposed to test observers.
struct BeliefState {
    int iteration = 0;
    int alphabet_order = 0;
    std::vector<double> pmf;                 // [edge * order + j]
    std::vector<Complex> interference_mean;  // per edge (d,c)
    std::vector<double> interference_var;    // per edge (d,c)
};

struct MpResult {
    std::vector<int> symbols;  // alphabet indices, one per column of H
    int iterations = 0;
    bool converged = false;
};

using MpObserver = std::function<void(const BeliefState&)>;

// Damped Gaussian message passing on the sparse effective channel graph.
// Synchronous (Jacobi) schedule: every mean/variance is computed from the
// previous iteration's beliefs, then all beliefs update at once, so the
// result does not depend on edge order. Interference variance is the
// per-edge form (each edge subtracts its own squared mean) plus the AWGN
// floor. Likelihood products run in the log domain with max subtraction.
MpResult mp_detect(const CVec& y, const EffectiveMatrix& h, const Alphabet& alphabet,
                   const MpConfig& cfg, const MpObserver& observer = {});

// Exact joint-MAP by exhaustive enumeration, minimizing ||y - Hx||^2.
// Candidates are scanned lexicographically (symbol 0 outermost), first
// minimum wins, so ties are deterministic. Fails when |A|^cols > 1e6.
std::vector<int> map_oracle(const CVec& y, const EffectiveMatrix& h, const Alphabet& alphabet);

// Per-subcarrier zero-forcing: X[k] = Y[k] / H[k]. Throws "singular
// subcarrier" when |H[k]| <= 1e-12 (the experiment harness treats those
// subcarriers as erasures).
CVec ofdm_equalize(const CVec& y, const CVec& h_freq);

// Hard nearest-symbol decision followed by Gray label emission, MSB first.
std::vector<std::uint8_t> demap(const CVec& symbols, const Alphabet& alphabet);

}  // namespace otfslab
