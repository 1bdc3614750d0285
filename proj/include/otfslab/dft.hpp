#pragma once

#include <cstddef>

#include "otfslab/types.hpp"

namespace otfslab::dft {

// Unitary discrete Fourier transform, 1/sqrt(N) scaled in BOTH directions so
// forward/inverse are exact inverses and energy is preserved. Forward kernel
// is exp(-j 2 pi nk / N), inverse exp(+j 2 pi nk / N).
//
// Power-of-two lengths take the radix-2 path (twiddle plans are cached and
// shared); other lengths fall back to the direct O(N^2) sum.
void transform(Complex* x, std::size_t n, bool inverse);
CVec transform(const CVec& v, bool inverse);  // throws on empty input

// Strided in-place transform over x[0], x[stride], ..., x[(n-1)*stride],
// used for the column passes of the 2-D symplectic transforms.
void transform_strided(Complex* x, std::size_t n, std::size_t stride, bool inverse);

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace otfslab::dft
