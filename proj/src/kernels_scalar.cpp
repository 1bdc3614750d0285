#include "otfslab/kernels.hpp"

// Reference kernels. Complex products are spelled out with the plain
// 4-multiply formula so the vector backends can reproduce the exact
// rounding sequence.

namespace otfslab::kern {

namespace {

inline Complex cmul1(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

void cmul_axpy_scalar(Complex* dst, Complex a, const Complex* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += cmul1(a, x[i]);
}

void cmul3_axpy_scalar(Complex* dst, Complex a, const Complex* x, const Complex* w,
                       std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += cmul1(cmul1(a, x[i]), w[i]);
}

void cmul_scalar(Complex* dst, const Complex* x, const Complex* w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = cmul1(x[i], w[i]);
}

void scale_scalar(Complex* x, std::size_t n, double s) {
    for (std::size_t i = 0; i < n; ++i) x[i] = {x[i].real() * s, x[i].imag() * s};
}

void radix2_pass_scalar(Complex* x, std::size_t n, std::size_t half, const Complex* tw) {
    const std::size_t step = 2 * half;
    for (std::size_t base = 0; base < n; base += step) {
        for (std::size_t j = 0; j < half; ++j) {
            const Complex u = x[base + j];
            const Complex v = cmul1(x[base + j + half], tw[j]);
            x[base + j] = u + v;
            x[base + j + half] = u - v;
        }
    }
}

void power_sum_max_scalar(const Complex* x, std::size_t n, double* sum, double* max) {
    double s = 0.0, m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
        s += p;
        if (p > m) m = p;
    }
    *sum = s;
    *max = m;
}

}  // namespace

const Table& scalar_table() {
    static const Table t{cmul_axpy_scalar, cmul3_axpy_scalar, cmul_scalar,
                         scale_scalar,     radix2_pass_scalar, power_sum_max_scalar};
    return t;
}

}  // namespace otfslab::kern
