#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/curvature/mean.hpp"
#include "afmass/mass/breakdown.hpp"
#include "afmass/metrics/surfaces.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/sphere_rule.hpp"

namespace afmass::mass {

//! Both sides of the convex-surface bound
//!   (1/(2(n-1) omega)) * integral of H  >=  (1/2) (|S| / omega)^{(n-2)/(n-1)},
//! with equality exactly for round spheres.
inline std::pair<double, double> af_boundary_bound(const metrics::SurfaceSpec& s, int n,
                                                   const numerics::SphereRule& rule) {
    if (s.dim() != n) throw std::invalid_argument("af_boundary_bound: dimension mismatch");
    const double omega = numerics::unit_sphere_measure(n);
    const double h_integral = metrics::integrate_surface(
        s, rule, [&](const Vec& x) { return curvature::mean_curvature_euclidean(s, x); });
    const double lhs = h_integral / (2.0 * (n - 1.0) * omega);
    const double area = metrics::surface_area(s, rule);
    const double rhs = 0.5 * std::pow(area / omega, (n - 2.0) / (n - 1.0));
    return {lhs, rhs};
}

//! Mass contributed by a collection of minimal boundary components of the
//! given areas: m = (1/2) (total area / omega)^{(n-2)/(n-1)}.
inline double black_hole_mass(const std::vector<double>& areas, int n) {
    check_dim(n, 3, 9, "black_hole_mass");
    double total = 0.0;
    for (double a : areas) {
        if (a < 0.0) throw std::invalid_argument("black_hole_mass: negative area");
        total += a;
    }
    if (total == 0.0) return 0.0;
    return 0.5 * std::pow(total / numerics::unit_sphere_measure(n), (n - 2.0) / (n - 1.0));
}

//! Least-squares fit of the asymptotic expansion
//!   u(x) = 1 + m/(2 r^{n-2}) + c/r^{n-1} + ...
//! over sampled points; returns the fitted mass. The samples must span at
//! least two distinct shells or the design degenerates. The error bar
//! combines the shift of the mass coefficient under one more expansion term
//! (available with three or more shells) with the leakage of the remaining
//! residual through the pseudoinverse.
inline MassBreakdown asymptotic_fit(const std::vector<std::pair<Vec, double>>& samples, int n) {
    check_dim(n, 3, 9, "asymptotic_fit");
    if (samples.size() < 2) throw std::invalid_argument("asymptotic_fit: need at least 2 samples");

    std::vector<double> radii;
    radii.reserve(samples.size());
    for (const auto& [x, uv] : samples) {
        (void)uv;
        const double r = norm(x);
        if (r <= 0.0) throw std::domain_error("asymptotic_fit: sample at the origin");
        radii.push_back(r);
    }
    std::vector<double> shells = radii;
    std::sort(shells.begin(), shells.end());
    std::size_t distinct = 1;
    for (std::size_t k = 1; k < shells.size(); ++k)
        if (shells[k] - shells[k - 1] > 1e-9 * shells[k]) ++distinct;
    if (distinct < 2)
        throw std::invalid_argument(
            "asymptotic_fit: samples span a single shell; spread them over at least two "
            "distinct radii");

    // Basis phi1 = 1/(2 r^{n-2}), phi2 = 1/r^{n-1}; fit u - 1 = m phi1 + c phi2.
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    std::vector<std::array<double, 3>> design; // (phi1, phi2, phi3) per sample
    design.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double r = radii[k];
        const double p1 = 0.5 / std::pow(r, n - 2.0);
        const double p2 = 1.0 / std::pow(r, n - 1.0);
        const double p3 = 1.0 / std::pow(r, static_cast<double>(n));
        const double y = samples[k].second - 1.0;
        a11 += p1 * p1;
        a12 += p1 * p2;
        a22 += p2 * p2;
        b1 += p1 * y;
        b2 += p2 * y;
        design.push_back({p1, p2, p3});
    }
    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) <= 1e-14 * a11 * a22)
        throw std::invalid_argument(
            "asymptotic_fit: normal equations are ill conditioned; spread samples over "
            "at least two distinct shells");
    const double m_fit = (b1 * a22 - b2 * a12) / det;
    const double c_fit = (a11 * b2 - a12 * b1) / det;

    double ss = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double model = m_fit * design[k][0] + c_fit * design[k][1];
        const double res = (samples[k].second - 1.0) - model;
        ss += res * res;
    }
    // Leakage of the fitted residual into the mass coefficient:
    // |dm| <= ||first row of the pseudoinverse|| * ||residual|| with
    // ||row||^2 = [(A^T A)^{-1}]_{11} = a22 / det.
    double error = std::sqrt(a22 / det) * std::sqrt(ss);

    if (distinct >= 3) {
        // Extended fit with the next decay power 1/r^n measures how much the
        // truncation of the model biases the mass coefficient.
        double m3[3][3] = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
        double rhs[3] = {0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const auto& p = design[k];
            const double y = samples[k].second - 1.0;
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) m3[i][j] += p[i] * p[j];
                rhs[i] += p[i] * y;
            }
        }
        const auto det3 = [&](const double c0[3], const double c1[3], const double c2[3]) {
            return c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) -
                   c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
                   c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
        };
        double col[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) col[j][i] = m3[i][j];
        const double d3 = det3(col[0], col[1], col[2]);
        const double scale3 = m3[0][0] * m3[1][1] * m3[2][2];
        if (std::abs(d3) > 1e-14 * scale3) {
            const double m_ext = det3(rhs, col[1], col[2]) / d3;
            const double c2_ext = det3(col[0], rhs, col[2]) / d3;
            const double c3_ext = det3(col[0], col[1], rhs) / d3;
            double ss3 = 0.0;
            for (std::size_t k = 0; k < samples.size(); ++k) {
                const auto& p = design[k];
                const double model = m_ext * p[0] + c2_ext * p[1] + c3_ext * p[2];
                const double res = (samples[k].second - 1.0) - model;
                ss3 += res * res;
            }
            const double e1[3] = {1.0, 0.0, 0.0};
            const double inv11 = det3(e1, col[1], col[2]) / d3; // [(A^T A)^{-1}]_{11}
            error = std::abs(m_fit - m_ext) +
                    (inv11 > 0.0 ? std::sqrt(inv11) * std::sqrt(ss3) : 0.0);
        }
    }

    MassBreakdown out;
    out.total = m_fit;
    out.boundary = m_fit; // a pure boundary-expansion coefficient
    out.error = error;
    out.method = "asymptotic-fit";
    return out;
}

} // namespace afmass::mass
