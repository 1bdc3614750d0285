#include "otfslab/dft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "otfslab/kernels.hpp"

namespace otfslab::dft {

namespace {

// Per-length plan: bit-reversal permutation plus per-stage twiddle tables for
// each direction. Immutable after construction, shared across threads.
struct Plan {
    std::size_t n;
    std::vector<std::size_t> bitrev;
    // Stage s handles half = 2^s; twiddles for all stages are packed
    // back-to-back (offset of stage s is 2^s - 1).
    std::vector<Complex> tw_fwd;
    std::vector<Complex> tw_inv;
    double scale;

    explicit Plan(std::size_t len) : n(len), scale(1.0 / std::sqrt(double(len))) {
        bitrev.resize(n);
        std::size_t j = 0;
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t bit = n >> 1;
            while (j & bit) {
                j ^= bit;
                bit >>= 1;
            }
            j ^= bit;
            bitrev[i] = j;
        }
        tw_fwd.resize(n - 1);
        tw_inv.resize(n - 1);
        std::size_t off = 0;
        for (std::size_t half = 1; half < n; half *= 2) {
            for (std::size_t k = 0; k < half; ++k) {
                const double ang = kPi * double(k) / double(half);
                tw_fwd[off + k] = {std::cos(ang), -std::sin(ang)};
                tw_inv[off + k] = {std::cos(ang), std::sin(ang)};
            }
            off += half;
        }
    }
};

std::shared_ptr<const Plan> plan_for(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<Plan>(n);
    return slot;
}

void fft_pow2(Complex* x, std::size_t n, bool inverse) {
    const auto plan = plan_for(n);
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = plan->bitrev[i];
        if (i < j) std::swap(x[i], x[j]);
    }
    const auto& kt = kern::active();
    const auto& tw = inverse ? plan->tw_inv : plan->tw_fwd;
    std::size_t off = 0;
    for (std::size_t half = 1; half < n; half *= 2) {
        kt.radix2_pass(x, n, half, tw.data() + off);
        off += half;
    }
    kt.scale(x, n, plan->scale);
}

// Direct unitary sum with an exactly reduced phase index; correct for any
// length, cost O(N^2).
void dft_direct(Complex* x, std::size_t n, bool inverse) {
    CVec w(n);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double ang = sgn * kTwoPi * double(r) / double(n);
        w[r] = {std::cos(ang), std::sin(ang)};
    }
    CVec out(n, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) acc += x[j] * w[(j * k) % n];
        out[k] = acc;
    }
    const double s = 1.0 / std::sqrt(double(n));
    for (std::size_t k = 0; k < n; ++k) x[k] = out[k] * s;
}

}  // namespace

void transform(Complex* x, std::size_t n, bool inverse) {
    if (n == 0) throw std::invalid_argument("dft: empty vector");
    if (n == 1) return;
    if (is_pow2(n)) {
        fft_pow2(x, n, inverse);
    } else {
        dft_direct(x, n, inverse);
    }
}

CVec transform(const CVec& v, bool inverse) {
    CVec out = v;
    transform(out.data(), out.size(), inverse);
    return out;
}

void transform_strided(Complex* x, std::size_t n, std::size_t stride, bool inverse) {
    if (stride == 1) {
        transform(x, n, inverse);
        return;
    }
    CVec tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i * stride];
    transform(tmp.data(), n, inverse);
    for (std::size_t i = 0; i < n; ++i) x[i * stride] = tmp[i];
}

}  // namespace otfslab::dft
