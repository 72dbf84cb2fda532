#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/gauss.hpp"
#include "afmass/numerics/sum.hpp"

namespace afmass::numerics {

//! Product quadrature on the unit sphere S^{n-1}: Gauss-Legendre in each
//! polar angle (the sin^k measure folded into the weights) and a uniform
//! trapezoid ring in the azimuth. Nodes are unit vectors; weights sum to
//! the sphere measure. The default degree integrates spherical polynomials
//! of degree <= 20 to rounding.
struct SphereRule {
    int n = 0;
    int degree = 0;
    std::vector<double> nodes;   // flat, size() * n unit coordinates
    std::vector<double> weights; // size(), sum = unit_sphere_measure(n)

    std::size_t size() const { return weights.size(); }

    const double* node_ptr(std::size_t k) const { return nodes.data() + k * n; }

    Vec node(std::size_t k) const {
        return Vec(node_ptr(k), node_ptr(k) + n);
    }
};

namespace detail {
constexpr std::size_t max_sphere_nodes = 4'000'000;
}

inline SphereRule make_sphere_rule(int n, int degree = 20) {
    check_dim(n, 2, 9, "make_sphere_rule");
    if (degree < 1) throw std::invalid_argument("make_sphere_rule: degree must be positive");

    // Azimuth ring: exact for trig polynomials of degree < azimuth count.
    const int azimuth = 2 * degree + 8;
    SphereRule rule;
    rule.n = 2;
    rule.degree = degree;
    rule.nodes.resize(2 * static_cast<std::size_t>(azimuth));
    rule.weights.assign(azimuth, 2.0 * pi / azimuth);
    for (int j = 0; j < azimuth; ++j) {
        const double phi = 2.0 * pi * j / azimuth;
        rule.nodes[2 * j] = std::cos(phi);
        rule.nodes[2 * j + 1] = std::sin(phi);
    }

    // Wrap one polar angle at a time: S^{m} points (cos t, sin t * q), q in S^{m-1},
    // measure sin^{m-1}(t) dt dS(q).
    const int polar = degree + 8;
    const GaussRule theta = gauss_legendre(polar, 0.0, pi);
    for (int m = 3; m <= n; ++m) {
        const std::size_t sub = rule.size();
        if (sub * polar > detail::max_sphere_nodes)
            throw std::domain_error("make_sphere_rule: node count would exceed the safety cap; "
                                    "lower the degree for this dimension");
        SphereRule next;
        next.n = m;
        next.degree = degree;
        next.nodes.resize(static_cast<std::size_t>(m) * sub * polar);
        next.weights.resize(sub * polar);
        std::size_t out = 0;
        for (int i = 0; i < polar; ++i) {
            const double ct = std::cos(theta.nodes[i]);
            const double st = std::sin(theta.nodes[i]);
            double wt = theta.weights[i];
            for (int p = 0; p < m - 2; ++p) wt *= st;
            for (std::size_t k = 0; k < sub; ++k, ++out) {
                double* dst = next.nodes.data() + out * m;
                dst[0] = ct;
                const double* src = rule.nodes.data() + k * (m - 1);
                for (int c = 0; c < m - 1; ++c) dst[c + 1] = st * src[c];
                next.weights[out] = wt * rule.weights[k];
            }
        }
        rule = std::move(next);
    }
    return rule;
}

//! Integral of f over the unit sphere S^{n-1}, pairwise-summed.
template <class F>
double integrate_unit_sphere(const SphereRule& rule, F&& f) {
    std::vector<double> terms(rule.size());
    Vec x(rule.n);
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const double* p = rule.node_ptr(k);
        for (int c = 0; c < rule.n; ++c) x[c] = p[c];
        terms[k] = rule.weights[k] * f(x);
    }
    return pairwise_sum(terms);
}

//! Integral of f over the coordinate sphere |x - center| = radius.
template <class F>
double integrate_sphere(const SphereRule& rule, const Vec& center, double radius, F&& f) {
    if (static_cast<int>(center.size()) != rule.n)
        throw std::invalid_argument("integrate_sphere: center dimension mismatch");
    if (radius <= 0.0) throw std::domain_error("integrate_sphere: radius must be positive");
    double scale = 1.0;
    for (int c = 0; c < rule.n - 1; ++c) scale *= radius;
    std::vector<double> terms(rule.size());
    Vec x(rule.n);
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const double* p = rule.node_ptr(k);
        for (int c = 0; c < rule.n; ++c) x[c] = center[c] + radius * p[c];
        terms[k] = rule.weights[k] * f(x);
    }
    return scale * pairwise_sum(terms);
}

//! Same, but the integrand also receives the outward unit normal.
template <class F>
double integrate_sphere_flux(const SphereRule& rule, const Vec& center, double radius, F&& f) {
    if (radius <= 0.0) throw std::domain_error("integrate_sphere_flux: radius must be positive");
    double scale = 1.0;
    for (int c = 0; c < rule.n - 1; ++c) scale *= radius;
    std::vector<double> terms(rule.size());
    Vec x(rule.n), nu(rule.n);
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const double* p = rule.node_ptr(k);
        for (int c = 0; c < rule.n; ++c) {
            nu[c] = p[c];
            x[c] = center[c] + radius * p[c];
        }
        terms[k] = rule.weights[k] * f(x, nu);
    }
    return scale * pairwise_sum(terms);
}

} // namespace afmass::numerics
