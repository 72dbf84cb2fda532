#pragma once

#include <cstddef>
#include <vector>

namespace afmass::numerics {

//! Pairwise (tree) summation. The reduction order depends only on the element
//! order, never on chunking, so results are bitwise reproducible and the
//! rounding error grows like log(n) instead of n.
inline double pairwise_sum(const double* data, std::size_t count) {
    if (count == 0) return 0.0;
    if (count <= 8) {
        double s = data[0];
        for (std::size_t i = 1; i < count; ++i) s += data[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& data) {
    return pairwise_sum(data.data(), data.size());
}

} // namespace afmass::numerics
