#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "otfslab/dft.hpp"
#include "otfslab/waveforms.hpp"
#include "test_util.hpp"

using namespace otfslab;
using testutil::max_abs_diff;
using testutil::norm2;
using testutil::random_cvec;

namespace {

DelayDopplerFrame random_dd(std::size_t m, std::size_t n, SeededRng& rng) {
    DelayDopplerFrame dd(m, n);
    dd.data() = random_cvec(m * n, rng);
    return dd;
}

// Direct double-sum evaluation of the delay-Doppler -> time-frequency map,
// independent of the FFT decomposition used by the implementation.
TimeFrequencyFrame isfft_oracle(const DelayDopplerFrame& dd) {
    const std::size_t m = dd.m_delay(), n = dd.n_doppler();
    TimeFrequencyFrame tf(n, m);
    const double scale = 1.0 / std::sqrt(double(n * m));
    for (std::size_t nn = 0; nn < n; ++nn) {
        for (std::size_t mm = 0; mm < m; ++mm) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < m; ++l) {
                    const double ang = kTwoPi * (double(nn * k) / double(n) -
                                                 double(mm * l) / double(m));
                    acc += dd.at(k, l) * Complex{std::cos(ang), std::sin(ang)};
                }
            }
            tf.at(nn, mm) = acc * scale;
        }
    }
    return tf;
}

DelayDopplerFrame sfft_oracle(const TimeFrequencyFrame& tf) {
    const std::size_t m = tf.m_freq(), n = tf.n_time();
    DelayDopplerFrame dd(m, n);
    const double scale = 1.0 / std::sqrt(double(n * m));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            Complex acc{0.0, 0.0};
            for (std::size_t nn = 0; nn < n; ++nn) {
                for (std::size_t mm = 0; mm < m; ++mm) {
                    const double ang = -kTwoPi * (double(nn * k) / double(n) -
                                                  double(mm * l) / double(m));
                    acc += tf.at(nn, mm) * Complex{std::cos(ang), std::sin(ang)};
                }
            }
            dd.at(k, l) = acc * scale;
        }
    }
    return dd;
}

}  // namespace

TEST_CASE("isfft: zero grid stays zero") {
    const DelayDopplerFrame dd(4, 4);
    CHECK(norm2(isfft(dd).data()) == 0.0);
}

TEST_CASE("isfft: impulse at the origin gives a flat TF grid") {
    for (const auto [m, n] : {std::pair<std::size_t, std::size_t>{4, 4}, {8, 2}, {2, 8}}) {
        DelayDopplerFrame dd(m, n);
        dd.at(0, 0) = std::sqrt(double(m * n));
        const auto tf = isfft(dd);
        for (const auto& z : tf.data()) CHECK(std::abs(z - Complex{1.0, 0.0}) < 1e-12);
    }
}

TEST_CASE("isfft/sfft match the direct double-sum oracle") {
    SeededRng rng(21, 0);
    for (const auto [m, n] : {std::pair<std::size_t, std::size_t>{4, 4}, {8, 8}, {8, 4},
                              {3, 5}}) {
        const auto dd = random_dd(m, n, rng);
        const auto tf = isfft(dd);
        CHECK(max_abs_diff(tf.data(), isfft_oracle(dd).data()) < 1e-12);
        CHECK(max_abs_diff(sfft(tf).data(), sfft_oracle(tf).data()) < 1e-12);
    }
}

TEST_CASE("sfft inverts isfft") {
    SeededRng rng(22, 0);
    const auto dd = random_dd(4, 4, rng);
    CHECK(max_abs_diff(sfft(isfft(dd)).data(), dd.data()) < 1e-12);
}

TEST_CASE("sfft: constant TF grid collapses to an origin impulse") {
    TimeFrequencyFrame tf(4, 8);
    for (auto& z : tf.data()) z = {1.0, 0.0};
    const auto dd = sfft(tf);
    CHECK(std::abs(dd.at(0, 0) - Complex{std::sqrt(32.0), 0.0}) < 1e-12);
    double rest = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t l = 0; l < 8; ++l) {
            if (k || l) rest += std::norm(dd.at(k, l));
        }
    }
    CHECK(rest < 1e-24);
}

TEST_CASE("sfft: 2x2 hand case matches the oracle") {
    TimeFrequencyFrame tf(2, 2);
    tf.at(0, 0) = {1.0, 0.0};
    tf.at(0, 1) = {0.0, 1.0};
    tf.at(1, 0) = {-0.5, 0.25};
    tf.at(1, 1) = {2.0, -1.0};
    CHECK(max_abs_diff(sfft(tf).data(), sfft_oracle(tf).data()) < 1e-14);
}

TEST_CASE("heisenberg: flat-in-frequency slots become constant 1/sqrt(M)") {
    const std::size_t m = 8, n = 3;
    TimeFrequencyFrame tf(n, m);
    for (std::size_t slot = 0; slot < n; ++slot) tf.at(slot, 0) = {1.0, 0.0};
    const CVec s = heisenberg(tf);
    for (const auto& z : s) CHECK(std::abs(z - Complex{1.0 / std::sqrt(8.0), 0.0}) < 1e-14);
}

TEST_CASE("heisenberg with a single slot is the OFDM modulator") {
    SeededRng rng(23, 0);
    const CVec x = random_cvec(16, rng);
    TimeFrequencyFrame tf(1, 16);
    tf.data() = x;
    CHECK(max_abs_diff(heisenberg(tf), ofdm_modulate(x, {0, CpScope::per_ofdm_symbol})) == 0.0);
}

TEST_CASE("wigner inverts heisenberg") {
    SeededRng rng(24, 0);
    TimeFrequencyFrame tf(4, 8);
    tf.data() = random_cvec(32, rng);
    const auto back = wigner(heisenberg(tf), 8, 4);
    CHECK(max_abs_diff(back.data(), tf.data()) < 1e-12);
}

TEST_CASE("wigner rejects a length mismatch") {
    CHECK_THROWS_AS(wigner(CVec(31), 8, 4), std::invalid_argument);
}

TEST_CASE("otfs loopback recovers the frame") {
    SeededRng rng(25, 0);
    for (const auto [m, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {4, 4}, {8, 8},
                              {32, 4}, {4, 32}, {8, 2}}) {
        for (const std::size_t cp : {std::size_t(0), std::size_t(3)}) {
            const auto dd = random_dd(m, n, rng);
            const CpConfig c{cp, CpScope::per_otfs_frame};
            const CVec s = otfs_modulate(dd, c);
            CHECK(s.size() == m * n + cp);
            const auto back = otfs_demodulate(s, m, n, c);
            CHECK(max_abs_diff(back.data(), dd.data()) < 1e-10);
        }
    }
}

TEST_CASE("otfs modulation preserves frame energy (CP excluded)") {
    SeededRng rng(26, 0);
    const auto dd = random_dd(8, 8, rng);
    const CVec s = otfs_modulate(dd, {4, CpScope::per_otfs_frame});
    const CVec payload(s.begin() + 4, s.end());
    const double e = norm2(dd.data());
    CHECK(std::abs(norm2(payload) - e) < 1e-10 * e);
}

TEST_CASE("otfs: zero frame modulates to zeros") {
    const DelayDopplerFrame dd(8, 4);
    CHECK(norm2(otfs_modulate(dd, {2, CpScope::per_otfs_frame})) == 0.0);
}

TEST_CASE("otfs with N=1 degenerates to OFDM on the delay-domain spectrum") {
    SeededRng rng(27, 0);
    const std::size_t m = 16;
    DelayDopplerFrame dd(m, 1);
    dd.data() = random_cvec(m, rng);
    // Corresponding OFDM input: the forward unitary spectrum of the delay
    // column (the single-slot ISFFT is exactly that DFT).
    const CVec spectrum = dft::transform(dd.data(), /*inverse=*/false);
    for (const std::size_t cp : {std::size_t(0), std::size_t(2)}) {
        const CVec a = otfs_modulate(dd, {cp, CpScope::per_otfs_frame});
        const CVec b = ofdm_modulate(spectrum, {cp, CpScope::per_ofdm_symbol});
        CHECK(max_abs_diff(a, b) < 1e-12);
    }
}

TEST_CASE("otfs_demodulate rejects a length mismatch") {
    CHECK_THROWS_AS(otfs_demodulate(CVec(65), 8, 8, {0, CpScope::per_otfs_frame}),
                    std::invalid_argument);
}

TEST_CASE("ofdm: impulse spectrum gives a constant time signal") {
    CVec x(4, Complex{0.0, 0.0});
    x[0] = {1.0, 0.0};
    const CVec s = ofdm_modulate(x, {0, CpScope::per_ofdm_symbol});
    for (const auto& z : s) CHECK(std::abs(z - Complex{0.5, 0.0}) < 1e-15);
}

TEST_CASE("ofdm round trip is identity") {
    SeededRng rng(28, 0);
    const CVec x = random_cvec(64, rng);
    const CpConfig cp{8, CpScope::per_ofdm_symbol};
    CHECK(max_abs_diff(ofdm_demodulate(ofdm_modulate(x, cp), 64, cp), x) < 1e-12);
}

TEST_CASE("ofdm payload obeys Parseval against the direct sum") {
    SeededRng rng(29, 0);
    const CVec x = random_cvec(32, rng);
    const CVec s = ofdm_modulate(x, {4, CpScope::per_ofdm_symbol});
    const CVec payload(s.begin() + 4, s.end());
    const double e = norm2(x);
    CHECK(std::abs(norm2(payload) - e) < 1e-12 * e);
}

TEST_CASE("ofdm: zeros stay zeros") {
    const CVec x(16, Complex{0.0, 0.0});
    const CpConfig cp{2, CpScope::per_ofdm_symbol};
    CHECK(norm2(ofdm_demodulate(ofdm_modulate(x, cp), 16, cp)) == 0.0);
}

TEST_CASE("ofdm_demodulate rejects a length mismatch") {
    CHECK_THROWS_AS(ofdm_demodulate(CVec(17), 16, {2, CpScope::per_ofdm_symbol}),
                    std::invalid_argument);
}

TEST_CASE("cyclic prefix must be shorter than the block") {
    const DelayDopplerFrame dd(2, 2);
    CHECK_THROWS_AS(otfs_modulate(dd, {4, CpScope::per_otfs_frame}), std::invalid_argument);
    CHECK_THROWS_AS(ofdm_modulate(CVec(4), {4, CpScope::per_ofdm_symbol}),
                    std::invalid_argument);
}

TEST_CASE("cp scope mismatches are rejected") {
    const DelayDopplerFrame dd(4, 4);
    CHECK_THROWS_AS(otfs_modulate(dd, {0, CpScope::per_ofdm_symbol}), std::invalid_argument);
    CHECK_THROWS_AS(ofdm_modulate(CVec(4), {0, CpScope::per_otfs_frame}),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// pilot frames
// ---------------------------------------------------------------------------

TEST_CASE("pilot layout: 8x8 grid with (2,2) guards leaves 39 data cells") {
    const auto lo = FrameLayout::make(8, 8, 4, 4, 3.0, 2, 2);
    // Guard zone is a (2*2+1)^2 square including the pilot cell.
    std::size_t blocked = 0;
    for (const auto b : lo.data_mask) blocked += (b == 0);
    CHECK(blocked == 25);
    CHECK(lo.data_count() == 39);
}

TEST_CASE("pilot frame with an empty data mask holds only the pilot") {
    const auto lo = FrameLayout::make(3, 3, 1, 1, 5.0, 1, 1);
    CHECK(lo.data_count() == 0);
    const auto dd = build_pilot_frame({}, lo);
    CHECK(std::abs(dd.at(1, 1) - Complex{5.0, 0.0}) == 0.0);
    CHECK(std::abs(norm2(dd.data()) - 25.0) == 0.0);
}

TEST_CASE("pilot frame fill/extract round trip preserves order") {
    SeededRng rng(30, 0);
    const auto lo = FrameLayout::make(8, 8, 4, 4, 3.0, 2, 2);
    const CVec syms = random_cvec(lo.data_count(), rng);
    const auto dd = build_pilot_frame(syms, lo);
    CHECK(max_abs_diff(extract_data_cells(dd, lo), syms) == 0.0);
    // Guard cells (other than the pilot) are zero.
    for (std::size_t i = 0; i < lo.data_mask.size(); ++i) {
        if (!lo.data_mask[i] && i != lo.pilot_cell()) CHECK(std::abs(dd.data()[i]) == 0.0);
    }
}

TEST_CASE("pilot frame rejects a symbol-count mismatch") {
    const auto lo = FrameLayout::make(8, 8, 4, 4, 3.0, 2, 2);
    CHECK_THROWS_AS(build_pilot_frame(CVec(5), lo), std::invalid_argument);
}
