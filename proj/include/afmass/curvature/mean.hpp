#pragma once

#include <cmath>
#include <stdexcept>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"
#include "afmass/metrics/surfaces.hpp"
#include "afmass/numerics/derivatives.hpp"

namespace afmass::curvature {

//! Mean curvature of the supported quadric surfaces in flat space, with the
//! outward normal, so round spheres give H = (n-1)/rho > 0. For the level set
//! F = y^T D y with D = diag(1/a_i^2):
//!   H = (tr D |Dy|^2 - y^T D^3 y) / |Dy|^3.
inline double mean_curvature_euclidean(const metrics::SurfaceSpec& s, const Vec& x) {
    if (static_cast<int>(x.size()) != s.dim())
        throw std::invalid_argument("mean_curvature_euclidean: point dimension mismatch");
    if (std::abs(std::sqrt(s.level(x)) - 1.0) > 1e-8)
        throw std::domain_error("mean_curvature_euclidean: point is not on the surface");
    const int n = s.dim();
    double tr_d = 0.0, dy2 = 0.0, yd3y = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a2 = s.radii[i] * s.radii[i];
        const double y = x[i] - s.center[i];
        tr_d += 1.0 / a2;
        dy2 += y * y / (a2 * a2);
        yd3y += y * y / (a2 * a2 * a2);
    }
    return (tr_d * dy2 - yd3y) / std::pow(dy2, 1.5);
}

//! Mean curvature of a supported surface in the conformally flat metric
//! g = u^{4/(n-2)} delta at the surface point with unit-sphere parameter xi.
//! Writing phi = u^{2/(n-2)} for the length factor, the outward-normal mean
//! curvatures transform as
//!   H_g = (1/phi) (H_flat + (n-1) d_nu(log phi))
//!       = u^{-2/(n-2)} (H_flat + (2(n-1)/(n-2)) u_nu / u).
inline double mean_curvature_conformal(const fields::ScalarField& u, int n,
                                       const metrics::SurfaceSpec& s, const Vec& xi,
                                       const numerics::DiffScheme& scheme) {
    check_dim(n, 3, 9, "mean_curvature_conformal");
    if (u.dim() != n)
        throw std::invalid_argument("mean_curvature_conformal: factor dimension mismatch");
    const Vec x = s.point(xi);
    const double uv = u.value(x);
    if (uv <= 0.0)
        throw std::domain_error("mean_curvature_conformal: conformal factor not positive");
    const Vec nrm = s.outward_normal(xi);
    const double u_nu = dot(numerics::gradient(u, x, scheme), nrm);
    const double h_flat = mean_curvature_euclidean(s, x);
    const double h = h_flat + 2.0 * (n - 1.0) / (n - 2.0) * u_nu / uv;
    return std::pow(uv, -2.0 / (n - 2.0)) * h;
}

//! Mean curvature of the coordinate r-sphere about the origin in the metric
//! g = u^{4/(n-2)} delta, evaluated on the first axis; constant over the
//! sphere when u is radial.
inline double mean_curvature_sphere_conformal(const fields::ScalarField& u, int n, double r,
                                              const numerics::DiffScheme& scheme) {
    if (r <= 0.0)
        throw std::domain_error("mean_curvature_sphere_conformal: radius must be positive");
    const auto s = metrics::SurfaceSpec::sphere_at(Vec(n, 0.0), r);
    Vec xi(n, 0.0);
    xi[0] = 1.0;
    return mean_curvature_conformal(u, n, s, xi, scheme);
}

} // namespace afmass::curvature
