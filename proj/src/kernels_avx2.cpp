#include "otfslab/kernels.hpp"

// AVX2 backend: one __m256d carries two interleaved complex<double> values.
// Complex products use the same mul/mul/addsub sequence as the scalar
// reference (no FMA contraction), so the element-wise kernels round
// identically; only the reductions differ in accumulation order.

#if defined(__AVX2__) && defined(__x86_64__)

#include <immintrin.h>

namespace otfslab::kern {

namespace {

inline __m256d cmul2(__m256d a, __m256d b) {
    const __m256d ar = _mm256_movedup_pd(a);       // [ar0 ar0 ar1 ar1]
    const __m256d ai = _mm256_permute_pd(a, 0xF);  // [ai0 ai0 ai1 ai1]
    const __m256d bs = _mm256_permute_pd(b, 0x5);  // [bi0 br0 bi1 br1]
    const __m256d t0 = _mm256_mul_pd(ar, b);
    const __m256d t1 = _mm256_mul_pd(ai, bs);
    return _mm256_addsub_pd(t0, t1);  // [re0 im0 re1 im1]
}

inline __m256d broadcast_c(Complex a) {
    return _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
}

inline Complex cmul1(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

void cmul_axpy_avx2(Complex* dst, Complex a, const Complex* x, std::size_t n) {
    const __m256d av = broadcast_c(a);
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(dst);
    const auto* xs = reinterpret_cast<const double*>(x);
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d dv = _mm256_loadu_pd(d + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(dv, cmul2(av, xv)));
    }
    for (; i < n; ++i) dst[i] += cmul1(a, x[i]);
}

void cmul3_axpy_avx2(Complex* dst, Complex a, const Complex* x, const Complex* w,
                     std::size_t n) {
    const __m256d av = broadcast_c(a);
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(dst);
    const auto* xs = reinterpret_cast<const double*>(x);
    const auto* ws = reinterpret_cast<const double*>(w);
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d wv = _mm256_loadu_pd(ws + 2 * i);
        const __m256d dv = _mm256_loadu_pd(d + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(dv, cmul2(cmul2(av, xv), wv)));
    }
    for (; i < n; ++i) dst[i] += cmul1(cmul1(a, x[i]), w[i]);
}

void cmul_avx2(Complex* dst, const Complex* x, const Complex* w, std::size_t n) {
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(dst);
    const auto* xs = reinterpret_cast<const double*>(x);
    const auto* ws = reinterpret_cast<const double*>(w);
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
        const __m256d wv = _mm256_loadu_pd(ws + 2 * i);
        _mm256_storeu_pd(d + 2 * i, cmul2(xv, wv));
    }
    for (; i < n; ++i) dst[i] = cmul1(x[i], w[i]);
}

void scale_avx2(Complex* x, std::size_t n, double s) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(x);
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), sv));
    }
    for (; i < n; ++i) x[i] = {x[i].real() * s, x[i].imag() * s};
}

void radix2_pass_avx2(Complex* x, std::size_t n, std::size_t half, const Complex* tw) {
    const std::size_t step = 2 * half;
    if (half < 2) {
        // First stage: adjacent (u, v) pairs, twiddle is 1.
        for (std::size_t base = 0; base < n; base += 2) {
            const Complex u = x[base];
            const Complex v = x[base + 1];
            x[base] = u + v;
            x[base + 1] = u - v;
        }
        return;
    }
    auto* d = reinterpret_cast<double*>(x);
    const auto* ts = reinterpret_cast<const double*>(tw);
    for (std::size_t base = 0; base < n; base += step) {
        for (std::size_t j = 0; j + 2 <= half; j += 2) {
            const std::size_t lo = 2 * (base + j);
            const std::size_t hi = 2 * (base + j + half);
            const __m256d u = _mm256_loadu_pd(d + lo);
            const __m256d v = cmul2(_mm256_loadu_pd(d + hi), _mm256_loadu_pd(ts + 2 * j));
            _mm256_storeu_pd(d + lo, _mm256_add_pd(u, v));
            _mm256_storeu_pd(d + hi, _mm256_sub_pd(u, v));
        }
    }
}

void power_sum_max_avx2(const Complex* x, std::size_t n, double* sum, double* max) {
    __m256d acc = _mm256_setzero_pd();
    __m256d mx = _mm256_setzero_pd();
    std::size_t i = 0;
    const auto* xs = reinterpret_cast<const double*>(x);
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(xs + 2 * i);
        const __m256d sq = _mm256_mul_pd(v, v);
        acc = _mm256_add_pd(acc, sq);
        mx = _mm256_max_pd(mx, _mm256_hadd_pd(sq, sq));
    }
    alignas(32) double a[4], m[4];
    _mm256_store_pd(a, acc);
    _mm256_store_pd(m, mx);
    double s = (a[0] + a[1]) + (a[2] + a[3]);
    double mm = m[0] > m[2] ? m[0] : m[2];
    for (; i < n; ++i) {
        const double p = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
        s += p;
        if (p > mm) mm = p;
    }
    *sum = s;
    *max = mm;
}

}  // namespace

const Table* avx2_table() {
    static const Table t{cmul_axpy_avx2, cmul3_axpy_avx2, cmul_avx2,
                         scale_avx2,     radix2_pass_avx2, power_sum_max_avx2};
    return &t;
}

}  // namespace otfslab::kern

#else

namespace otfslab::kern {
const Table* avx2_table() { return nullptr; }
}  // namespace otfslab::kern

#endif
