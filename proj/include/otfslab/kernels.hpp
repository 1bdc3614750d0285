#pragma once

#include <cstddef>
#include <string>

#include "otfslab/types.hpp"

namespace otfslab::kern {

// Hot inner loops of the modem/channel/metrics pipeline, grouped behind a
// function table so a SIMD variant can be swapped in at runtime. The scalar
// table is the reference; vector backends must agree with it (exactly for the
// element-wise kernels, to a small tolerance for the reductions, which
// accumulate in a different order).
struct Table {
    // dst[i] += a * x[i]
    void (*cmul_axpy)(Complex* dst, Complex a, const Complex* x, std::size_t n);
    // dst[i] += a * x[i] * w[i]
    void (*cmul3_axpy)(Complex* dst, Complex a, const Complex* x, const Complex* w, std::size_t n);
    // dst[i] = x[i] * w[i]
    void (*cmul)(Complex* dst, const Complex* x, const Complex* w, std::size_t n);
    // x[i] *= s
    void (*scale)(Complex* x, std::size_t n, double s);
    // One radix-2 butterfly pass over blocks of 2*half elements; tw has half
    // twiddles shared by every block.
    void (*radix2_pass)(Complex* x, std::size_t n, std::size_t half, const Complex* tw);
    // *sum = sum |x[i]|^2, *max = max |x[i]|^2  (n == 0 gives 0, 0)
    void (*power_sum_max)(const Complex* x, std::size_t n, double* sum, double* max);
};

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool supported(Backend b);

// Table for an explicit backend; throws std::runtime_error if unsupported.
const Table& table(Backend b);

// Runtime-selected table: best supported backend, overridable with
// OTFSLAB_KERNELS=scalar|avx2 (checked once, at first use).
const Table& active();
Backend active_backend();

}  // namespace otfslab::kern
