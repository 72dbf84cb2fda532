#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/curvature/mean.hpp"
#include "afmass/mass/adm.hpp"
#include "afmass/mass/bounds.hpp"
#include "afmass/mass/breakdown.hpp"
#include "afmass/mass/volume.hpp"
#include "afmass/mass/zas.hpp"
#include "afmass/metrics/instance.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/volume_rule.hpp"

namespace afmass::mass {

namespace detail {

//! The boundary-sum identities assume the excluded components bound disjoint
//! convex bodies. Spheres and ellipsoids are convex; disjointness is checked
//! conservatively through bounding balls, so touching or overlapping
//! components are rejected.
inline void require_disjoint_components(const std::vector<metrics::SurfaceSpec>& comps,
                                        const char* who) {
    for (std::size_t a = 0; a < comps.size(); ++a) {
        const double ra = *std::max_element(comps[a].radii.begin(), comps[a].radii.end());
        for (std::size_t b = a + 1; b < comps.size(); ++b) {
            const double rb = *std::max_element(comps[b].radii.begin(), comps[b].radii.end());
            Vec gap(comps[a].center);
            for (int i = 0; i < comps[a].dim(); ++i) gap[i] -= comps[b].center[i];
            if (norm(gap) <= ra + rb)
                throw std::invalid_argument(std::string(who) +
                                            ": excluded components are not verifiably disjoint; "
                                            "the boundary union is outside the supported scope");
        }
    }
}

} // namespace detail

//! Mass-versus-boundary-area report for an asymptotically flat graph metric.
//! The mass comes from the boundary identity (flat mean curvature flux plus
//! the scalar curvature bulk term); the competing side is assembled two ways,
//! from the total boundary area and from the per-component sum, the latter
//! being the stronger bound.
inline InequalityReport penrose_report_graph(const metrics::GraphMetric& gm, std::string id,
                                             const numerics::VolumeRule& rule,
                                             const numerics::DiffScheme& scheme,
                                             double tol = 1e-3) {
    const int n = gm.dim();
    detail::require_disjoint_components(gm.excluded(), "penrose_report_graph");

    InequalityReport rep;
    rep.instance_id = std::move(id);

    const MassBreakdown mb = mass_graph_boundary(gm, rule, scheme);
    rep.mass = mb.total;
    rep.mass_error = mb.error;

    for (const auto& s : gm.excluded())
        rep.component_areas.push_back(metrics::surface_area(s, rule.angular));
    rep.m_bh = black_hole_mass(rep.component_areas, n);

    double component_sum = 0.0;
    for (double a : rep.component_areas) component_sum += black_hole_mass({a}, n);

    rep.checks.push_back(InequalityCheck::make("mass-vs-total-boundary-area", rep.mass,
                                               rep.m_bh, tol));
    rep.checks.push_back(InequalityCheck::make("mass-vs-component-area-sum", rep.mass,
                                               component_sum, tol));
    return rep;
}

struct CombinedOptions {
    AdmOptions adm{};
    int sphere_degree = 12;
    double tol = 1e-3;
    double certify_tol = 1e-6; // max |H_g| for a certified minimal surface
    numerics::DiffScheme scheme = numerics::DiffScheme::analytic_scheme();
};

//! Joint lower-bound report for a conformally flat instance: the total mass
//! against the black-hole contribution of the declared horizons plus the
//! (nonpositive) contribution of the resolved singularities. Horizons whose
//! measured mean curvature exceeds the certification tolerance are still
//! counted but flagged as approximate.
inline InequalityReport combined_report(const metrics::MetricInstance& inst,
                                        const std::vector<metrics::SurfaceSpec>& horizons,
                                        const std::vector<metrics::ZASResolution>& zas,
                                        CombinedOptions opt = {}) {
    if (!inst.conformal)
        throw std::invalid_argument(
            "combined_report: only conformally flat instances are supported");
    const int n = inst.n;
    const auto& g = *inst.conformal;
    const auto rule = numerics::make_sphere_rule(n, opt.sphere_degree);

    InequalityReport rep;
    rep.instance_id = inst.id;

    const MassBreakdown mb = adm_mass(inst, opt.adm);
    rep.mass = mb.total;
    rep.mass_error = mb.error;

    for (const auto& s : horizons) {
        if (s.dim() != n)
            throw std::invalid_argument("combined_report: horizon dimension mismatch");
        double worst_h = 0.0;
        std::vector<double> terms(rule.size());
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const Vec xi = rule.node(k);
            const double h =
                curvature::mean_curvature_conformal(g.factor_field(), n, s, xi, opt.scheme);
            worst_h = std::max(worst_h, std::abs(h));
            terms[k] = rule.weights[k] * s.area_element(xi) * g.area_element(s.point(xi));
        }
        if (worst_h > opt.certify_tol) rep.approximate_horizons = true;
        rep.component_areas.push_back(numerics::pairwise_sum(terms));
    }
    rep.m_bh = black_hole_mass(rep.component_areas, n);

    if (!zas.empty()) {
        double integral = 0.0;
        for (const auto& res : zas) {
            if (res.dim() != n)
                throw std::invalid_argument("combined_report: resolution dimension mismatch");
            integral += zas_regular_integral(res, rule, opt.scheme);
        }
        const double mean = integral / numerics::unit_sphere_measure(n);
        rep.m_zas = -2.0 / ((n - 2.0) * (n - 2.0)) * std::pow(mean, n / (n - 1.0));
    }

    rep.checks.push_back(InequalityCheck::make("mass-vs-horizons-plus-singularities", rep.mass,
                                               rep.m_bh + rep.m_zas, opt.tol));
    return rep;
}

} // namespace afmass::mass
