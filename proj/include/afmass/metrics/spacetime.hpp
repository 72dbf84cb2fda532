#pragma once

#include <cmath>
#include <stdexcept>

#include "afmass/core.hpp"

namespace afmass::metrics {

//! Static spherically symmetric vacuum spacetime in isotropic coordinates
//! (t, x^1..x^n), parametrized by k:
//!   g_00  = -((1 - k/r^{n-2}) / (1 + k/r^{n-2}))^2,
//!   g_ii  = (1 + k/r^{n-2})^{4/(n-2)}  (spatial block conformally flat).
//! The chart covers r > |k|^{1/(n-2)}; k = 0 is Minkowski space.
struct SpacetimeInstance {
    double k = 0.0;
    int n = 3;

    SpacetimeInstance(double k_param, int dim) : k(k_param), n(dim) {
        check_dim(dim, 3, 9, "SpacetimeInstance");
    }

    double chart_radius() const { return k == 0.0 ? 0.0 : std::pow(std::abs(k), 1.0 / (n - 2.0)); }

    bool in_chart(double r) const { return r > chart_radius(); }
};

//! Diagonal components of the (n+1)-metric at coordinate radius r, ordered
//! (t, x^1, ..., x^n). Throws on chart-singular radii.
inline Mat spacetime_components(double k, int n, double r) {
    const SpacetimeInstance st(k, n);
    if (r <= 0.0) throw std::domain_error("spacetime_components: r must be positive");
    if (!st.in_chart(r))
        throw std::domain_error("spacetime_components: r at or below the chart singularity");
    const double q = k / std::pow(r, n - 2.0);
    Mat g(n + 1);
    const double lapse = (1.0 - q) / (1.0 + q);
    g(0, 0) = -lapse * lapse;
    const double spatial = std::pow(1.0 + q, 4.0 / (n - 2.0));
    for (int i = 1; i <= n; ++i) g(i, i) = spatial;
    return g;
}

} // namespace afmass::metrics
