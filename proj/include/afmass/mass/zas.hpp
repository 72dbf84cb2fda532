#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/curvature/mean.hpp"
#include "afmass/mass/breakdown.hpp"
#include "afmass/metrics/conformal.hpp"
#include "afmass/metrics/instance.hpp"
#include "afmass/metrics/zas.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/extrapolate.hpp"
#include "afmass/numerics/sphere_rule.hpp"
#include "afmass/numerics/sum.hpp"

namespace afmass::mass {

//! Surface integral of (nubar(phibar))^{2(n-1)/n} over Sigma in the
//! resolution's background area form. Throws when the normal derivative is
//! not positive somewhere, which breaks the regularity hypothesis.
inline double zas_regular_integral(const metrics::ZASResolution& res,
                                   const numerics::SphereRule& rule,
                                   const numerics::DiffScheme& scheme) {
    const int n = res.dim();
    if (rule.n != n) throw std::invalid_argument("zas_regular_integral: rule dimension mismatch");
    const double p = 2.0 * (n - 1.0) / n;
    std::vector<double> terms(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const Vec xi = rule.node(k);
        const double nd = res.normal_derivative(xi, scheme);
        if (nd <= 0.0)
            throw std::domain_error(
                "zas_regular_integral: normal derivative of the resolving function is not "
                "positive; the resolution is not regular");
        const Vec x = res.sigma().point(xi);
        terms[k] = rule.weights[k] * res.sigma().area_element(xi) *
                   res.background_area_element(x) * std::pow(nd, p);
    }
    return numerics::pairwise_sum(terms);
}

//! Regular mass of a resolved zero area singularity:
//!   m_reg = -(2/(n-2)^2) ((1/omega) integral (nubar(phibar))^{2(n-1)/n} dAbar)^{n/(n-1)}.
inline double zas_regular_mass(const metrics::ZASResolution& res,
                               const numerics::SphereRule& rule,
                               const numerics::DiffScheme& scheme) {
    const int n = res.dim();
    const double integral = zas_regular_integral(res, rule, scheme);
    const double mean = integral / numerics::unit_sphere_measure(n);
    return -2.0 / ((n - 2.0) * (n - 2.0)) * std::pow(mean, n / (n - 1.0));
}

//! Value of the singular-mass sequence on the coordinate r-sphere:
//!   v(r) = -(1/(2(n-1)^2)) ((1/omega) integral H^{2(n-1)/n} dA_g)^{n/(n-1)},
//! H measured in g with the outward normal. Throws when H <= 0 somewhere on
//! the sphere, where the paper's convention leaves the power undefined.
inline double zas_sequence_value(const metrics::ConformalMetric& g, double r,
                                 const numerics::SphereRule& rule,
                                 const numerics::DiffScheme& scheme) {
    const int n = g.dim();
    const auto s = metrics::SurfaceSpec::sphere_at(Vec(n, 0.0), r);
    const double p = 2.0 * (n - 1.0) / n;
    std::vector<double> terms(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const Vec xi = rule.node(k);
        const double h = curvature::mean_curvature_conformal(g.factor_field(), n, s, xi, scheme);
        if (h <= 0.0)
            throw std::domain_error("zas_sequence_value: nonpositive mean curvature on the "
                                    "approach sphere; sign convention undefined here");
        const Vec x = s.point(xi);
        terms[k] = rule.weights[k] * s.area_element(xi) * g.area_element(x) * std::pow(h, p);
    }
    const double mean = numerics::pairwise_sum(terms) / numerics::unit_sphere_measure(n);
    return -1.0 / (2.0 * (n - 1.0) * (n - 1.0)) * std::pow(mean, n / (n - 1.0));
}

//! Limit of the singular-mass sequence as the spheres shrink onto the
//! singular radius, extrapolated in the gap r - r_sing. The radii must
//! decrease strictly toward the singular radius.
inline numerics::LimitEstimate zas_mass_limit(const metrics::ConformalMetric& g,
                                              const std::vector<double>& radii,
                                              const numerics::SphereRule& rule,
                                              const numerics::DiffScheme& scheme) {
    if (radii.size() < 2) throw std::invalid_argument("zas_mass_limit: need at least 2 radii");
    const double r_sing = g.excluded() ? g.excluded()->radii[0] : 0.0;
    std::vector<std::pair<double, double>> samples; // (gap, value), gap decreasing
    samples.reserve(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (k > 0 && !(radii[k] < radii[k - 1]))
            throw std::invalid_argument("zas_mass_limit: radii must strictly decrease");
        if (radii[k] <= r_sing)
            throw std::domain_error("zas_mass_limit: radius at or below the singular sphere");
        samples.emplace_back(radii[k] - r_sing, zas_sequence_value(g, radii[k], rule, scheme));
    }
    return numerics::extrapolate_at_zero(std::move(samples), {1.0, 2});
}

//! Quasi-local mass of a surface measured in the conformally flat metric:
//!   M(S) = (1/2)(|S|_g/omega)^{(n-2)/(n-1)}
//!          - (1/(2(n-1)^2)) ((1/omega) integral H^{2(n-1)/n} dA_g)^{n/(n-1)}.
//! Mean curvatures in [-h_tol, h_tol] count as zero, so certified minimal
//! surfaces reduce to the pure area term; H below -h_tol throws.
inline double quasilocal_mass(const metrics::ConformalMetric& g, const metrics::SurfaceSpec& s,
                              const numerics::SphereRule& rule,
                              const numerics::DiffScheme& scheme, double h_tol = 1e-9) {
    const int n = g.dim();
    if (s.dim() != n) throw std::invalid_argument("quasilocal_mass: surface dimension mismatch");
    const double omega = numerics::unit_sphere_measure(n);
    const double p = 2.0 * (n - 1.0) / n;
    std::vector<double> area_terms(rule.size()), h_terms(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const Vec xi = rule.node(k);
        const Vec x = s.point(xi);
        const double da = rule.weights[k] * s.area_element(xi) * g.area_element(x);
        double h = curvature::mean_curvature_conformal(g.factor_field(), n, s, xi, scheme);
        if (h < -h_tol)
            throw std::domain_error("quasilocal_mass: negative mean curvature on the surface; "
                                    "sign convention undefined here");
        if (h < h_tol) h = 0.0;
        area_terms[k] = da;
        h_terms[k] = da * (h == 0.0 ? 0.0 : std::pow(h, p));
    }
    const double area = numerics::pairwise_sum(area_terms);
    const double h_mean = numerics::pairwise_sum(h_terms) / omega;
    return 0.5 * std::pow(area / omega, (n - 2.0) / (n - 1.0)) -
           1.0 / (2.0 * (n - 1.0) * (n - 1.0)) * std::pow(h_mean, n / (n - 1.0));
}

//! Instance-level entry point; defined for the conformally flat families
//! (the flat instance is the unit factor).
inline double quasilocal_mass(const metrics::MetricInstance& inst, const metrics::SurfaceSpec& s,
                              const numerics::SphereRule& rule,
                              const numerics::DiffScheme& scheme, double h_tol = 1e-9) {
    if (!inst.conformal)
        throw std::invalid_argument(
            "quasilocal_mass: only conformally flat instances are supported");
    return quasilocal_mass(*inst.conformal, s, rule, scheme, h_tol);
}

} // namespace afmass::mass
