#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "otfslab/dft.hpp"
#include "otfslab/kernels.hpp"
#include "otfslab/qam.hpp"
#include "otfslab/rng.hpp"
#include "test_util.hpp"

using namespace otfslab;
using testutil::max_abs_diff;
using testutil::norm2;
using testutil::random_cvec;

// ---------------------------------------------------------------------------
// kernels: every backend must agree with the scalar reference
// ---------------------------------------------------------------------------

namespace {

std::vector<kern::Backend> available_backends() {
    std::vector<kern::Backend> b{kern::Backend::scalar};
    if (kern::supported(kern::Backend::avx2)) b.push_back(kern::Backend::avx2);
    return b;
}

}  // namespace

TEST_CASE("kernel backends agree on element-wise ops") {
    SeededRng rng(7, 0);
    const auto& ref = kern::table(kern::Backend::scalar);
    for (const auto backend : available_backends()) {
        const auto& kt = kern::table(backend);
        for (const std::size_t n : {std::size_t(1), std::size_t(2), std::size_t(7),
                                    std::size_t(64), std::size_t(257)}) {
            const CVec x = random_cvec(n, rng);
            const CVec w = random_cvec(n, rng);
            const Complex a{0.37, -1.21};

            CVec d0 = random_cvec(n, rng);
            CVec d1 = d0;
            ref.cmul_axpy(d0.data(), a, x.data(), n);
            kt.cmul_axpy(d1.data(), a, x.data(), n);
            CHECK(max_abs_diff(d0, d1) == 0.0);

            CVec e0 = d0, e1 = d0;
            ref.cmul3_axpy(e0.data(), a, x.data(), w.data(), n);
            kt.cmul3_axpy(e1.data(), a, x.data(), w.data(), n);
            CHECK(max_abs_diff(e0, e1) == 0.0);

            CVec p0(n), p1(n);
            ref.cmul(p0.data(), x.data(), w.data(), n);
            kt.cmul(p1.data(), x.data(), w.data(), n);
            CHECK(max_abs_diff(p0, p1) == 0.0);

            CVec s0 = x, s1 = x;
            ref.scale(s0.data(), n, 0.831);
            kt.scale(s1.data(), n, 0.831);
            CHECK(max_abs_diff(s0, s1) == 0.0);
        }
    }
}

TEST_CASE("kernel backends agree on butterfly passes") {
    SeededRng rng(8, 0);
    const auto& ref = kern::table(kern::Backend::scalar);
    for (const auto backend : available_backends()) {
        const auto& kt = kern::table(backend);
        for (const std::size_t half : {std::size_t(1), std::size_t(2), std::size_t(4),
                                       std::size_t(8)}) {
            const std::size_t n = 4 * half;
            const CVec tw = random_cvec(half, rng);
            CVec a = random_cvec(n, rng);
            CVec b = a;
            ref.radix2_pass(a.data(), n, half, tw.data());
            kt.radix2_pass(b.data(), n, half, tw.data());
            CHECK(max_abs_diff(a, b) == 0.0);
        }
    }
}

TEST_CASE("kernel backends agree on power reductions (tolerance: reduction order)") {
    SeededRng rng(9, 0);
    const auto& ref = kern::table(kern::Backend::scalar);
    for (const auto backend : available_backends()) {
        const auto& kt = kern::table(backend);
        for (const std::size_t n : {std::size_t(1), std::size_t(5), std::size_t(1024),
                                    std::size_t(1023)}) {
            const CVec x = random_cvec(n, rng);
            double s0, m0, s1, m1;
            ref.power_sum_max(x.data(), n, &s0, &m0);
            kt.power_sum_max(x.data(), n, &s1, &m1);
            CHECK(m0 == m1);  // max has no rounding
            CHECK(std::abs(s0 - s1) <= 1e-13 * s0);
        }
    }
}

// ---------------------------------------------------------------------------
// dft
// ---------------------------------------------------------------------------

namespace {

// Independent direct evaluation of the unitary transform.
CVec dft_oracle(const CVec& v, bool inverse) {
    const std::size_t n = v.size();
    const double sgn = inverse ? 1.0 : -1.0;
    CVec out(n, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sgn * kTwoPi * double(j * k % n) / double(n);
            acc += v[j] * Complex{std::cos(ang), std::sin(ang)};
        }
        out[k] = acc / std::sqrt(double(n));
    }
    return out;
}

}  // namespace

TEST_CASE("dft: inverse of an impulse is flat") {
    const CVec v{{1, 0}, {0, 0}, {0, 0}, {0, 0}};
    const CVec y = dft::transform(v, true);
    for (const auto& z : y) CHECK(std::abs(z - Complex{0.5, 0.0}) < 1e-15);
}

TEST_CASE("dft: zeros map to zeros") {
    const CVec v(16, Complex{0.0, 0.0});
    CHECK(norm2(dft::transform(v, false)) == 0.0);
}

TEST_CASE("dft matches the direct-sum oracle (pow2 and odd lengths)") {
    SeededRng rng(11, 0);
    for (const std::size_t n : {std::size_t(2), std::size_t(8), std::size_t(12),
                                std::size_t(27), std::size_t(64)}) {
        const CVec v = random_cvec(n, rng);
        for (const bool inv : {false, true}) {
            CHECK(max_abs_diff(dft::transform(v, inv), dft_oracle(v, inv)) < 1e-12);
        }
    }
}

TEST_CASE("dft: Parseval holds on a random length-8 vector") {
    SeededRng rng(12, 0);
    const CVec v = random_cvec(8, rng);
    CHECK(std::abs(norm2(dft::transform(v, false)) - norm2(v)) < 1e-12);
}

TEST_CASE("dft: unitarity over random lengths") {
    SeededRng rng(13, 0);
    for (const std::size_t n : {std::size_t(4), std::size_t(33), std::size_t(256)}) {
        const CVec v = random_cvec(n, rng);
        const double e = norm2(v);
        CHECK(std::abs(norm2(dft::transform(v, false)) - e) < 1e-10 * e);
    }
}

TEST_CASE("dft: round trip is identity for radix-2 lengths") {
    SeededRng rng(14, 0);
    for (const std::size_t n : {std::size_t(2), std::size_t(4), std::size_t(8),
                                std::size_t(256), std::size_t(1024)}) {
        const CVec v = random_cvec(n, rng);
        CHECK(max_abs_diff(dft::transform(dft::transform(v, false), true), v) < 1e-12);
    }
}

TEST_CASE("dft: empty input is rejected") {
    CVec v;
    CHECK_THROWS_WITH_AS(dft::transform(v, false), "dft: empty vector", std::invalid_argument);
}

// ---------------------------------------------------------------------------
// alphabet
// ---------------------------------------------------------------------------

TEST_CASE("alphabet: unit-energy 4-QAM is the +-1+-j lattice") {
    const auto a = Alphabet::make(4);
    const double c = 1.0 / std::sqrt(2.0);
    std::set<std::pair<double, double>> expect{{-c, -c}, {-c, c}, {c, -c}, {c, c}};
    for (const auto& p : a.points()) {
        CHECK(expect.count({p.real(), p.imag()}) == 1);
    }
}

TEST_CASE("alphabet: mean symbol energy is exactly one") {
    for (const int order : {4, 16, 64}) {
        const auto a = Alphabet::make(order);
        double e = 0.0;
        for (const auto& p : a.points()) e += std::norm(p);
        CHECK(std::abs(e / order - 1.0) < 1e-12);
    }
}

TEST_CASE("alphabet: unsupported order is rejected") {
    CHECK_THROWS_AS(Alphabet::make(5), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet::make(8), std::invalid_argument);
}

TEST_CASE("alphabet: lattice neighbors differ in exactly one bit") {
    for (const int order : {4, 16, 64}) {
        const auto a = Alphabet::make(order);
        const int levels = int(std::round(std::sqrt(double(order))));
        // Points are laid out level-major: j = ti * levels + tq.
        for (int ti = 0; ti < levels; ++ti) {
            for (int tq = 0; tq < levels; ++tq) {
                const int j = ti * levels + tq;
                if (ti + 1 < levels) {
                    const int k = (ti + 1) * levels + tq;
                    CHECK(__builtin_popcount(a.labels()[j] ^ a.labels()[k]) == 1);
                }
                if (tq + 1 < levels) {
                    const int k = ti * levels + tq + 1;
                    CHECK(__builtin_popcount(a.labels()[j] ^ a.labels()[k]) == 1);
                }
            }
        }
    }
}

TEST_CASE("alphabet: labels are a bijection") {
    for (const int order : {4, 16, 64}) {
        const auto a = Alphabet::make(order);
        std::set<std::uint32_t> seen(a.labels().begin(), a.labels().end());
        CHECK(int(seen.size()) == order);
        for (const auto l : seen) CHECK(l < std::uint32_t(order));
    }
}

// ---------------------------------------------------------------------------
// rng / awgn
// ---------------------------------------------------------------------------

TEST_CASE("rng: same (seed, stream) reproduces draws bit-for-bit") {
    SeededRng a(42, 3), b(42, 3);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    SeededRng c(42, 4);
    bool differs = false;
    SeededRng a2(42, 3);
    for (int i = 0; i < 16; ++i) differs |= (a2.next_u64() != c.next_u64());
    CHECK(differs);
}

TEST_CASE("rng: gaussian moments") {
    SeededRng rng(1234, 0);
    const std::size_t n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / double(n);
    const double var = sum2 / double(n) - mean * mean;
    CHECK(std::abs(mean) < 0.005);
    CHECK(var > 0.99);
    CHECK(var < 1.01);
}

TEST_CASE("awgn: zero variance is the identity") {
    SeededRng rng(5, 0);
    const CVec v = random_cvec(64, rng);
    CHECK(max_abs_diff(awgn(v, 0.0, rng), v) == 0.0);
}

TEST_CASE("awgn: negative variance is rejected") {
    SeededRng rng(5, 0);
    const CVec v(4, Complex{0, 0});
    CHECK_THROWS_AS(awgn(v, -1.0, rng), std::invalid_argument);
}

TEST_CASE("awgn: sample variance calibrated (1e6 samples)") {
    SeededRng rng(99, 1);
    const CVec zeros(1000000, Complex{0.0, 0.0});
    const CVec noisy = awgn(zeros, 1.0, rng);
    const double var = norm2(noisy) / double(noisy.size());
    CHECK(var > 0.99);
    CHECK(var < 1.01);
}

TEST_CASE("awgn: same seed gives identical output") {
    SeededRng r1(77, 5), r2(77, 5);
    const CVec v = random_cvec(128, r1);
    SeededRng n1(31, 9), n2(31, 9);
    CHECK(max_abs_diff(awgn(v, 0.3, n1), awgn(v, 0.3, n2)) == 0.0);
}
