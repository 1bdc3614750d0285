#pragma once

#include <cmath>

#include "otfslab/rng.hpp"
#include "otfslab/types.hpp"

namespace testutil {

using otfslab::Complex;
using otfslab::CVec;

inline CVec random_cvec(std::size_t n, otfslab::SeededRng& rng) {
    CVec v(n);
    for (auto& z : v) {
        auto [a, b] = rng.gaussian_pair();
        z = Complex{a, b} * std::sqrt(0.5);
    }
    return v;
}

inline double max_abs_diff(const CVec& a, const CVec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double norm2(const CVec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

}  // namespace testutil
