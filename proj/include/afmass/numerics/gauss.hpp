#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "afmass/numerics/constants.hpp"

namespace afmass::numerics {

//! Gauss-Legendre rule on [-1, 1]. Nodes are symmetric; weights sum to 2.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

//! N-point Gauss-Legendre nodes and weights by Newton iteration on P_N,
//! seeded with the Chebyshev-like asymptotic root estimate. Converges to
//! machine precision in a handful of steps for any practical N.
inline GaussRule gauss_legendre(int npts) {
    if (npts < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
    GaussRule rule;
    rule.nodes.resize(npts);
    rule.weights.resize(npts);
    const int half = (npts + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (npts + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_N(x) and P_N'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= npts; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = npts * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[npts - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[npts - 1 - i] = w;
    }
    if (npts % 2 == 1) rule.nodes[npts / 2] = 0.0; // exact midpoint, not 1e-17 noise
    return rule;
}

//! The same rule mapped affinely onto [a, b].
inline GaussRule gauss_legendre(int npts, double a, double b) {
    GaussRule rule = gauss_legendre(npts);
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int i = 0; i < npts; ++i) {
        rule.nodes[i] = mid + hw * rule.nodes[i];
        rule.weights[i] *= hw;
    }
    return rule;
}

} // namespace afmass::numerics
