#include "otfslab/qam.hpp"

#include <cmath>
#include <stdexcept>

namespace otfslab {

namespace {
inline std::uint32_t gray(std::uint32_t t) { return t ^ (t >> 1); }
}

Alphabet Alphabet::make(int order) {
    if (order != 4 && order != 16 && order != 64) {
        throw std::invalid_argument("alphabet: unsupported order (expected 4, 16 or 64)");
    }
    Alphabet a;
    a.order_ = order;
    a.bits_ = 0;
    while ((1 << a.bits_) < order) ++a.bits_;
    const int axis_bits = a.bits_ / 2;
    const int levels = 1 << axis_bits;
    // PAM levels -(L-1), ..., -1, 1, ..., L-1; mean |a|^2 of the square
    // lattice is 2(order-1)/3 before scaling.
    const double scale = std::sqrt(3.0 / (2.0 * (order - 1)));
    a.points_.resize(order);
    a.labels_.resize(order);
    a.index_of_label_.assign(order, -1);
    int j = 0;
    for (int ti = 0; ti < levels; ++ti) {
        for (int tq = 0; tq < levels; ++tq, ++j) {
            const double re = (2 * ti - (levels - 1)) * scale;
            const double im = (2 * tq - (levels - 1)) * scale;
            a.points_[j] = {re, im};
            a.labels_[j] = (gray(std::uint32_t(ti)) << axis_bits) | gray(std::uint32_t(tq));
            a.index_of_label_[a.labels_[j]] = j;
        }
    }
    return a;
}

int Alphabet::nearest(Complex y) const {
    int best = 0;
    double best_d2 = std::norm(y - points_[0]);
    for (int j = 1; j < order_; ++j) {
        const double d2 = std::norm(y - points_[j]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

}  // namespace otfslab
