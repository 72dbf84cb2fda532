#pragma once

#include <cmath>
#include <stdexcept>

#include "afmass/core.hpp"
#include "afmass/curvature/mean.hpp"
#include "afmass/curvature/scalar.hpp"
#include "afmass/mass/breakdown.hpp"
#include "afmass/metrics/graph.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/volume_rule.hpp"

namespace afmass::mass {

//! Volume-integral mass of a conformally flat metric, computed through the
//! energy-density chain: m = integral of R u^{-1} / (2(n-1) omega) dV_g.
//! The exponent (2-n)/(n-2) of the change of volume form simplifies to the
//! constant -1, which is what the u^{-1} factor implements.
inline MassBreakdown mass_conformal(const fields::ScalarField& u, int n,
                                    const numerics::VolumeRule& rule,
                                    const numerics::DiffScheme& scheme) {
    check_dim(n, 3, 9, "mass_conformal");
    if (u.dim() != n) throw std::invalid_argument("mass_conformal: factor dimension mismatch");
    const double norm = 2.0 * (n - 1.0) * numerics::unit_sphere_measure(n);
    const double volume_power = 2.0 * n / (n - 2.0);
    const auto est = numerics::integrate_exterior_volume(rule, [&](const Vec& x) {
        const double uv = u.value(x);
        if (uv <= 0.0) throw std::domain_error("mass_conformal: conformal factor not positive");
        const double r_scal = curvature::scalar_curvature_conformal(u, n, x, scheme);
        return r_scal / uv * std::pow(uv, volume_power) / norm;
    });
    MassBreakdown out;
    out.total = est.value;
    out.volume = est.value;
    out.error = est.error;
    out.method = "conformal-volume";
    return out;
}

//! Volume-integral mass of a graph metric over flat space with no excluded
//! region: m = integral of R (1+|grad f|^2)^{-1/2} / (2(n-1) omega) dV_g.
inline MassBreakdown mass_graph(const fields::ScalarField& f, int n,
                                const numerics::VolumeRule& rule,
                                const numerics::DiffScheme& scheme) {
    check_dim(n, 3, 9, "mass_graph");
    if (f.dim() != n) throw std::invalid_argument("mass_graph: graph dimension mismatch");
    const double norm = 2.0 * (n - 1.0) * numerics::unit_sphere_measure(n);
    const auto est = numerics::integrate_exterior_volume(rule, [&](const Vec& x) {
        const double r_scal = curvature::scalar_curvature_graph(f, x, scheme);
        const Vec df = numerics::gradient(f, x, scheme);
        const double w2 = 1.0 + dot(df, df);
        // dV_g = sqrt(w2) dV_delta cancels the (w2)^{-1/2} weight exactly.
        return r_scal * std::pow(w2, -0.5) * std::sqrt(w2) / norm;
    });
    MassBreakdown out;
    out.total = est.value;
    out.volume = est.value;
    out.error = est.error;
    out.method = "graph-volume";
    return out;
}

//! Boundary + volume mass split of a graph metric over the exterior of its
//! excluded region: the boundary term integrates the flat mean curvature
//! over each boundary component, the volume term integrates the scalar
//! curvature over the rule's domain (points inside any excluded component
//! contribute zero). Boundary hypotheses are re-checked before integrating.
inline MassBreakdown mass_graph_boundary(const metrics::GraphMetric& gm,
                                         const numerics::VolumeRule& rule,
                                         const numerics::DiffScheme& scheme) {
    const int n = gm.dim();
    const double norm = 2.0 * (n - 1.0) * numerics::unit_sphere_measure(n);
    gm.check_boundary_hypotheses(rule.angular);

    double boundary = 0.0;
    for (const auto& s : gm.excluded()) {
        boundary += metrics::integrate_surface(s, rule.angular, [&](const Vec& x) {
                        return curvature::mean_curvature_euclidean(s, x);
                    }) / norm;
    }

    const auto est = numerics::integrate_exterior_volume(rule, [&](const Vec& x) {
        if (!gm.in_domain(x)) return 0.0;
        const double r_scal = curvature::scalar_curvature_graph(gm.graph_field(), x, scheme);
        const Vec df = numerics::gradient(gm.graph_field(), x, scheme);
        const double w2 = 1.0 + dot(df, df);
        return r_scal * std::pow(w2, -0.5) * std::sqrt(w2) / norm;
    });

    MassBreakdown out;
    out.boundary = boundary;
    out.volume = est.value;
    out.total = boundary + est.value;
    out.error = est.error;
    out.method = "graph-boundary";
    return out;
}

} // namespace afmass::mass
