#include "otfslab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace otfslab {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed;
    const std::uint64_t a = splitmix64(x);
    const std::uint64_t b = splitmix64(x);
    x = a ^ (stream_id * 0xD1B54A32D192ED03ull + b);
    for (auto& s : s_) s = splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t SeededRng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double SeededRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SeededRng::uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> SeededRng::gaussian_pair() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = kTwoPi * u2;
    return {r * std::cos(th), r * std::sin(th)};
}

double SeededRng::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_gaussian_;
    }
    auto [a, b] = gaussian_pair();
    cached_gaussian_ = b;
    has_cached_ = true;
    return a;
}

CVec awgn(const CVec& v, double noise_variance, SeededRng& rng) {
    if (noise_variance < 0.0) throw std::invalid_argument("awgn: negative noise variance");
    if (noise_variance == 0.0) return v;
    const double sigma = std::sqrt(noise_variance / 2.0);
    CVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto [a, b] = rng.gaussian_pair();
        out[i] = v[i] + Complex{sigma * a, sigma * b};
    }
    return out;
}

}  // namespace otfslab
