#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"

namespace afmass::fields {

//! u(x) = 1 + m/(2 |x|^{n-2}), the spherically symmetric zero-scalar-curvature
//! conformal factor. Domain |x| > (|m|/2)^{1/(n-2)} when m < 0 (u hits zero
//! there); punctured at the origin when m > 0.
inline std::shared_ptr<RadialField> schwarzschild_conformal_factor(double m, int n) {
    check_dim(n, 3, 9, "schwarzschild_conformal_factor");
    const double q = n - 2.0;
    RadialProfile p;
    p.u = [m, q](double r) { return 1.0 + m / (2.0 * std::pow(r, q)); };
    p.du = [m, q](double r) { return -q * m / (2.0 * std::pow(r, q + 1.0)); };
    p.d2u = [m, q](double r) { return q * (q + 1.0) * m / (2.0 * std::pow(r, q + 2.0)); };
    p.d3u = [m, q](double r) { return -q * (q + 1.0) * (q + 2.0) * m / (2.0 * std::pow(r, q + 3.0)); };
    const double r_min = m < 0.0 ? std::pow(-m / 2.0, 1.0 / q) : 0.0;
    auto f = std::make_shared<RadialField>(n, std::move(p), r_min, Vec{}, m != 0.0);
    f->declare_decay(q);
    return f;
}

//! The deviation term m/(2 |x - c|^{n-2}) alone, for superposed factors.
inline std::shared_ptr<RadialField> harmonic_bump(double m, int n, Vec center) {
    check_dim(n, 3, 9, "harmonic_bump");
    const double q = n - 2.0;
    RadialProfile p;
    p.u = [m, q](double r) { return m / (2.0 * std::pow(r, q)); };
    p.du = [m, q](double r) { return -q * m / (2.0 * std::pow(r, q + 1.0)); };
    p.d2u = [m, q](double r) { return q * (q + 1.0) * m / (2.0 * std::pow(r, q + 2.0)); };
    p.d3u = [m, q](double r) { return -q * (q + 1.0) * (q + 2.0) * m / (2.0 * std::pow(r, q + 3.0)); };
    auto f = std::make_shared<RadialField>(n, std::move(p), 0.0, std::move(center), true);
    f->declare_decay(q);
    return f;
}

//! u = 1 + sum_i m_i / (2 |x - c_i|^{n-2}): superposed harmonic deviations.
inline FieldPtr multi_center_factor(int n, const std::vector<double>& masses,
                                    const std::vector<Vec>& centers) {
    if (masses.size() != centers.size())
        throw std::invalid_argument("multi_center_factor: one center per mass required");
    std::vector<FieldPtr> parts;
    parts.push_back(std::make_shared<ConstantField>(n, 1.0));
    for (std::size_t i = 0; i < masses.size(); ++i)
        parts.push_back(harmonic_bump(masses[i], n, centers[i]));
    auto f = std::make_shared<SumField>(n, std::move(parts));
    f->declare_decay(n - 2.0);
    return f;
}

//! Conformal factor equal to the mass-m profile outside the unit sphere and a
//! C^1 quadratic cap inside, so the deficit -Laplacian(u) is the constant
//! n(n-2)m/2 on the unit ball and zero outside.
inline std::shared_ptr<RadialField> capped_schwarzschild_factor(double m, int n) {
    check_dim(n, 3, 9, "capped_schwarzschild_factor");
    const double q = n - 2.0;
    RadialProfile inside;
    const double a = 1.0 + m / 2.0 + m * q / 4.0;
    const double b = m * q / 4.0;
    inside.u = [a, b](double r) { return a - b * r * r; };
    inside.du = [b](double r) { return -2.0 * b * r; };
    inside.d2u = [b](double) { return -2.0 * b; };
    inside.d3u = [](double) { return 0.0; };
    RadialProfile outside;
    outside.u = [m, q](double r) { return 1.0 + m / (2.0 * std::pow(r, q)); };
    outside.du = [m, q](double r) { return -q * m / (2.0 * std::pow(r, q + 1.0)); };
    outside.d2u = [m, q](double r) { return q * (q + 1.0) * m / (2.0 * std::pow(r, q + 2.0)); };
    outside.d3u = [m, q](double r) { return -q * (q + 1.0) * (q + 2.0) * m / (2.0 * std::pow(r, q + 3.0)); };
    auto f = std::make_shared<RadialField>(n, std::vector<RadialProfile>{inside, outside},
                                           std::vector<double>{1.0});
    f->declare_decay(q);
    return f;
}

//! Radial graph profile of the mass-m spatial Schwarzschild slice in three
//! dimensions: f(x) = sqrt(8m(|x| - 2m)) on |x| >= 2m, which satisfies
//! 1 + f'(r)^2 = (1 - 2m/r)^{-1}.
inline std::shared_ptr<RadialField> schwarzschild_graph_profile(double m, int n) {
    if (n != 3)
        throw std::domain_error("schwarzschild_graph_profile: closed form implemented for n = 3 only");
    if (m <= 0.0) throw std::domain_error("schwarzschild_graph_profile: mass must be positive");
    const double c = std::sqrt(8.0 * m);
    const double b = 2.0 * m;
    RadialProfile p;
    p.u = [c, b](double r) { return c * std::sqrt(r - b); };
    p.du = [c, b](double r) { return 0.5 * c / std::sqrt(r - b); };
    p.d2u = [c, b](double r) { return -0.25 * c * std::pow(r - b, -1.5); };
    p.d3u = [c, b](double r) { return 0.375 * c * std::pow(r - b, -2.5); };
    auto f = std::make_shared<RadialField>(n, std::move(p), b);
    f->declare_decay(1.0);
    return f;
}

//! C^3 step profile: 0 for rho <= r_in, 1 for rho >= r_out, the degree-7
//! smoothstep in between. Used to blend separated graph profiles.
inline std::shared_ptr<RadialField> smooth_step_radial(int n, double r_in, double r_out, Vec center) {
    if (!(r_out > r_in) || r_in < 0.0)
        throw std::invalid_argument("smooth_step_radial: need 0 <= r_in < r_out");
    const double w = r_out - r_in;
    auto t_of = [r_in, w](double r) { return (r - r_in) / w; };
    RadialProfile zero{[](double) { return 0.0; }, [](double) { return 0.0; },
                       [](double) { return 0.0; }, [](double) { return 0.0; }};
    RadialProfile one{[](double) { return 1.0; }, [](double) { return 0.0; },
                      [](double) { return 0.0; }, [](double) { return 0.0; }};
    RadialProfile ramp;
    ramp.u = [t_of](double r) {
        const double t = t_of(r);
        return ((((-20.0 * t + 70.0) * t - 84.0) * t + 35.0)) * t * t * t * t;
    };
    ramp.du = [t_of, w](double r) {
        const double t = t_of(r);
        return ((((-140.0 * t + 420.0) * t - 420.0) * t + 140.0)) * t * t * t / w;
    };
    ramp.d2u = [t_of, w](double r) {
        const double t = t_of(r);
        return ((((-840.0 * t + 2100.0) * t - 1680.0) * t + 420.0)) * t * t / (w * w);
    };
    ramp.d3u = [t_of, w](double r) {
        const double t = t_of(r);
        return ((((-4200.0 * t + 8400.0) * t - 5040.0) * t + 840.0)) * t / (w * w * w);
    };
    return std::make_shared<RadialField>(n, std::vector<RadialProfile>{zero, ramp, one},
                                         std::vector<double>{r_in, r_out}, 0.0, std::move(center));
}

//! Two Schwarzschild graph throats at separated centers, blended so the field
//! equals the pure profile near each throat and the plain superposition far
//! out. Requires the blending annuli to clear both throat spheres.
inline FieldPtr glued_graph_throats(double m1, const Vec& c1, double m2, const Vec& c2,
                                    double blend_in, double blend_out) {
    const int n = static_cast<int>(c1.size());
    if (n != 3) throw std::domain_error("glued_graph_throats: profiles are n = 3 closed forms");
    const double sep = norm(c1 - c2);
    if (blend_out >= sep - std::max(2.0 * m1, 2.0 * m2) || blend_in <= std::max(2.0 * m1, 2.0 * m2))
        throw std::invalid_argument("glued_graph_throats: blend annulus must separate the throats");
    auto profile_at = [n](double m, const Vec& c) {
        auto base = schwarzschild_graph_profile(m, n);
        RadialProfile p;
        p.u = [base](double r) { return base->profile_value(r); };
        p.du = [base](double r) { return base->profile_d1(r); };
        p.d2u = [base](double r) { return base->profile_d2(r); };
        p.d3u = [base](double r) { return base->profile_d3(r); };
        return std::make_shared<RadialField>(n, std::move(p), 2.0 * m, c);
    };
    FieldPtr f1 = profile_at(m1, c1);
    FieldPtr f2 = profile_at(m2, c2);
    FieldPtr cut_near_2 = smooth_step_radial(n, blend_in, blend_out, c2); // 0 near c2
    FieldPtr cut_near_1 = smooth_step_radial(n, blend_in, blend_out, c1); // 0 near c1
    std::vector<FieldPtr> parts;
    parts.push_back(std::make_shared<ProductField>(f1, cut_near_2));
    parts.push_back(std::make_shared<ProductField>(f2, cut_near_1));
    auto f = std::make_shared<SumField>(n, std::move(parts));
    f->declare_decay(1.0);
    return f;
}

} // namespace afmass::fields
