#include "otfslab/frame.hpp"

#include <algorithm>

namespace otfslab {

namespace {
// Cyclic distance between bins a and b on a ring of size n.
inline int ring_dist(std::size_t a, std::size_t b, std::size_t n) {
    int d = int(a > b ? a - b : b - a);
    return std::min(d, int(n) - d);
}
}  // namespace

FrameLayout FrameLayout::make(std::size_t m_delay, std::size_t n_doppler,
                              std::size_t pilot_doppler, std::size_t pilot_delay,
                              double pilot_amplitude, int guard_doppler, int guard_delay) {
    if (pilot_doppler >= n_doppler || pilot_delay >= m_delay) {
        throw std::invalid_argument("pilot position outside the grid");
    }
    if (pilot_amplitude <= 0.0) throw std::invalid_argument("pilot amplitude must be > 0");
    if (guard_doppler < 0 || guard_delay < 0) {
        throw std::invalid_argument("guard widths must be >= 0");
    }
    if (2 * guard_doppler + 1 > int(n_doppler) || 2 * guard_delay + 1 > int(m_delay)) {
        throw std::invalid_argument("guard zone does not fit in the grid");
    }
    FrameLayout lo;
    lo.m_delay = m_delay;
    lo.n_doppler = n_doppler;
    lo.pilot_doppler = pilot_doppler;
    lo.pilot_delay = pilot_delay;
    lo.pilot_amplitude = pilot_amplitude;
    lo.guard_doppler = guard_doppler;
    lo.guard_delay = guard_delay;
    lo.data_mask.assign(m_delay * n_doppler, 1);
    for (std::size_t k = 0; k < n_doppler; ++k) {
        for (std::size_t l = 0; l < m_delay; ++l) {
            if (ring_dist(k, pilot_doppler, n_doppler) <= guard_doppler &&
                ring_dist(l, pilot_delay, m_delay) <= guard_delay) {
                lo.data_mask[k * m_delay + l] = 0;
            }
        }
    }
    return lo;
}

std::size_t FrameLayout::data_count() const {
    std::size_t c = 0;
    for (auto b : data_mask) c += b;
    return c;
}

std::vector<std::uint32_t> FrameLayout::data_cells() const {
    std::vector<std::uint32_t> cells;
    cells.reserve(data_count());
    for (std::uint32_t i = 0; i < data_mask.size(); ++i) {
        if (data_mask[i]) cells.push_back(i);
    }
    return cells;
}

}  // namespace otfslab
