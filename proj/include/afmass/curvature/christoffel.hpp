#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/metrics/spacetime.hpp"
#include "afmass/numerics/derivatives.hpp"

namespace afmass::curvature {

//! Connection coefficients Gamma^alpha_{beta gamma} of a static chart in
//! n+1 spacetime dimensions, index 0 = time. Symmetric in the lower pair.
struct ChristoffelTensor {
    int dim = 0; // n+1
    std::vector<double> a;

    explicit ChristoffelTensor(int d) : dim(d), a(static_cast<std::size_t>(d) * d * d, 0.0) {}
    double& operator()(int al, int be, int ga) { return a[(al * dim + be) * dim + ga]; }
    double operator()(int al, int be, int ga) const { return a[(al * dim + be) * dim + ga]; }
};

//! Christoffel symbols of the static vacuum chart at spatial point x, from
//! central differences of the diagonal component evaluators. The chart is
//! time independent, so all time derivatives vanish.
inline ChristoffelTensor christoffel(const metrics::SpacetimeInstance& st, const Vec& x,
                                     const numerics::DiffScheme& scheme) {
    const int n = st.n;
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("christoffel: spatial point dimension mismatch");
    const auto components = [&](const Vec& y) {
        return metrics::spacetime_components(st.k, st.n, norm(y));
    };
    const Mat g0 = components(x); // throws when x is outside the exterior chart
    const double h = scheme.step(1, x);
    if (st.k != 0.0 && norm(x) - st.chart_radius() <= 2.0 * h)
        throw std::domain_error("christoffel: point too close to the chart boundary");

    // dg[m](al,be) = d g_{al be} / d x^m, m = 1..n spatial (index m-1 here).
    std::vector<Mat> dg;
    dg.reserve(n);
    for (int m = 0; m < n; ++m) {
        Vec xp(x), xm(x);
        xp[m] += h;
        xm[m] -= h;
        const Mat gp = components(xp), gm = components(xm);
        Mat d(n + 1);
        for (int al = 0; al <= n; ++al)
            for (int be = 0; be <= n; ++be) d(al, be) = (gp(al, be) - gm(al, be)) / (2.0 * h);
        dg.push_back(std::move(d));
    }
    const auto deriv = [&](int al, int be, int ga) { // d g_{al be} / d x^ga, ga = 0 is time
        return ga == 0 ? 0.0 : dg[ga - 1](al, be);
    };

    ChristoffelTensor t(n + 1);
    for (int al = 0; al <= n; ++al) {
        const double ginv = 1.0 / g0(al, al); // the chart metric is diagonal
        for (int be = 0; be <= n; ++be)
            for (int ga = be; ga <= n; ++ga) {
                const double v = 0.5 * ginv *
                                 (deriv(al, be, ga) + deriv(al, ga, be) - deriv(be, ga, al));
                t(al, be, ga) = v;
                t(al, ga, be) = v;
            }
    }
    return t;
}

//! Coordinate acceleration a = Gamma^n_{00} of a static test particle at
//! (0, ..., 0, r); r^{n-1} a tends to 2 k (n-2) at large r.
inline double geodesic_acceleration(double k, int n, double r,
                                    const numerics::DiffScheme& scheme) {
    const metrics::SpacetimeInstance st{k, n};
    Vec x(n, 0.0);
    x[n - 1] = r;
    return christoffel(st, x, scheme)(n, 0, 0);
}

} // namespace afmass::curvature
