#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace afmass {

//! Dense point / vector in R^n. Dimensions stay small (n <= 9 with time).
using Vec = std::vector<double>;

//! Row-major square matrix of fixed small dimension.
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

//! Rank-3 tensor with all indices of the same small dimension.
struct Ten3 {
    int n = 0;
    std::vector<double> a;

    Ten3() = default;
    explicit Ten3(int dim)
        : n(dim), a(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

    double& operator()(int i, int j, int k) {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
    double operator()(int i, int j, int k) const {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
};

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec operator+(Vec x, const Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
}

inline Vec operator-(Vec x, const Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
}

inline Vec operator*(double c, Vec x) {
    for (auto& v : x) v *= c;
    return x;
}

inline void check_dim(int n, int lo, int hi, const char* what) {
    if (n < lo || n > hi)
        throw std::domain_error(std::string(what) + ": dimension " + std::to_string(n) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

} // namespace afmass
