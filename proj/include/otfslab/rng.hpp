#pragma once

#include <cstdint>
#include <utility>

#include "otfslab/types.hpp"

namespace otfslab {

// Splittable deterministic generator: (seed, stream_id) fully determines the
// draw sequence, bit-for-bit, on every platform. Monte-Carlo workers each own
// a stream derived from the frame index, so results do not depend on worker
// count or scheduling order. xoshiro256++ state, seeded through splitmix64.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t next_u64();

    // Uniform on [0, 1) / (0, 1], 53-bit resolution.
    double uniform();
    double uniform_pos();

    // Standard normal via Box-Muller on the uniform stream.
    std::pair<double, double> gaussian_pair();
    double gaussian();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

// Adds circular complex white Gaussian noise of total variance
// `noise_variance` per sample (split equally between the two components).
// Throws std::invalid_argument for negative variance.
CVec awgn(const CVec& v, double noise_variance, SeededRng& rng);

}  // namespace otfslab
