#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "otfslab/types.hpp"

namespace otfslab {

// M x N delay-Doppler grid x[k,l]; Doppler index k in [0,N), delay index l in
// [0,M). Stored row-major with k outermost, so the flat index k*M + l is also
// the vectorization order used by the effective channel matrix.
class DelayDopplerFrame {
public:
    DelayDopplerFrame(std::size_t m_delay, std::size_t n_doppler)
        : m_(m_delay), n_(n_doppler), grid_(m_delay * n_doppler, Complex{0.0, 0.0}) {
        if (m_ < 1 || n_ < 1) throw std::invalid_argument("frame dimensions must be >= 1");
    }

    std::size_t m_delay() const { return m_; }
    std::size_t n_doppler() const { return n_; }
    std::size_t size() const { return grid_.size(); }

    Complex& at(std::size_t k, std::size_t l) { return grid_[k * m_ + l]; }
    const Complex& at(std::size_t k, std::size_t l) const { return grid_[k * m_ + l]; }

    CVec& data() { return grid_; }
    const CVec& data() const { return grid_; }

private:
    std::size_t m_, n_;
    CVec grid_;
};

// N x M time-frequency grid X[n,m]; time slot n in [0,N), subcarrier m in
// [0,M). Flat index n*M + m.
class TimeFrequencyFrame {
public:
    TimeFrequencyFrame(std::size_t n_time, std::size_t m_freq)
        : n_(n_time), m_(m_freq), grid_(n_time * m_freq, Complex{0.0, 0.0}) {
        if (m_ < 1 || n_ < 1) throw std::invalid_argument("frame dimensions must be >= 1");
    }

    std::size_t n_time() const { return n_; }
    std::size_t m_freq() const { return m_; }
    std::size_t size() const { return grid_.size(); }

    Complex& at(std::size_t n, std::size_t m) { return grid_[n * m_ + m]; }
    const Complex& at(std::size_t n, std::size_t m) const { return grid_[n * m_ + m]; }

    CVec& data() { return grid_; }
    const CVec& data() const { return grid_; }

private:
    std::size_t n_, m_;
    CVec grid_;
};

enum class CpScope { per_ofdm_symbol, per_otfs_frame };

struct CpConfig {
    std::size_t cp_len = 0;
    CpScope scope = CpScope::per_otfs_frame;
};

// Embedded-pilot frame geometry: a single high-power pilot cell plus a cyclic
// guard zone of (2*guard_delay+1) x (2*guard_doppler+1) cells around it; the
// remaining cells carry data. data_mask is flat in the k*M + l order.
struct FrameLayout {
    std::size_t m_delay = 0;
    std::size_t n_doppler = 0;
    std::size_t pilot_doppler = 0;  // k_p
    std::size_t pilot_delay = 0;    // l_p
    double pilot_amplitude = 1.0;
    int guard_doppler = 0;  // half-width in Doppler bins
    int guard_delay = 0;    // half-width in delay bins
    std::vector<std::uint8_t> data_mask;

    static FrameLayout make(std::size_t m_delay, std::size_t n_doppler,
                            std::size_t pilot_doppler, std::size_t pilot_delay,
                            double pilot_amplitude, int guard_doppler, int guard_delay);

    std::size_t data_count() const;
    std::size_t pilot_cell() const { return pilot_doppler * m_delay + pilot_delay; }
    // Data cell indices in fill order (Doppler-major rows, delay fastest).
    std::vector<std::uint32_t> data_cells() const;
};

}  // namespace otfslab
