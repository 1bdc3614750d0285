#pragma once

#include <cstdint>
#include <vector>

#include "otfslab/types.hpp"

namespace otfslab {

// Square Gray-mapped QAM alphabet, normalized to unit mean symbol energy.
// Supported orders: 4, 16, 64. Bit labels split half/half between the I and
// Q axes (I bits first), each axis binary-reflected Gray coded, so lattice
// neighbors differ in exactly one bit.
class Alphabet {
public:
    static Alphabet make(int order);  // throws std::invalid_argument

    int order() const { return order_; }
    int bits_per_symbol() const { return bits_; }
    const CVec& points() const { return points_; }
    // Gray label of point j, bits_per_symbol low bits.
    const std::vector<std::uint32_t>& labels() const { return labels_; }

    Complex map_label(std::uint32_t label) const { return points_[index_of_label_[label]]; }

    // Nearest constellation point (minimum Euclidean distance); ties resolve
    // to the lowest point index.
    int nearest(Complex y) const;

private:
    int order_ = 0;
    int bits_ = 0;
    CVec points_;
    std::vector<std::uint32_t> labels_;
    std::vector<int> index_of_label_;
};

}  // namespace otfslab
