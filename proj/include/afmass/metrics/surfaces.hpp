#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "afmass/core.hpp"
#include "afmass/numerics/sphere_rule.hpp"
#include "afmass/numerics/sum.hpp"

namespace afmass::metrics {

//! Closed surface bounding a convex region: a round sphere or an axis-aligned
//! ellipsoid. These are the only boundary shapes the toolkit integrates over,
//! chosen because their normals and curvatures have closed forms.
struct SurfaceSpec {
    enum class Shape { sphere, ellipsoid };

    Shape shape = Shape::sphere;
    Vec center;
    Vec radii; // per-axis semiaxes; all equal for a sphere

    int dim() const { return static_cast<int>(center.size()); }

    static SurfaceSpec sphere_at(Vec c, double rho) {
        if (rho <= 0.0) throw std::invalid_argument("SurfaceSpec: radius must be positive");
        SurfaceSpec s;
        s.shape = Shape::sphere;
        s.radii = Vec(c.size(), rho);
        s.center = std::move(c);
        return s;
    }

    static SurfaceSpec ellipsoid_at(Vec c, Vec semiaxes) {
        if (c.size() != semiaxes.size())
            throw std::invalid_argument("SurfaceSpec: center/semiaxes dimension mismatch");
        for (double a : semiaxes)
            if (a <= 0.0) throw std::invalid_argument("SurfaceSpec: semiaxes must be positive");
        SurfaceSpec s;
        s.shape = Shape::ellipsoid;
        s.center = std::move(c);
        s.radii = std::move(semiaxes);
        return s;
    }

    bool is_round() const {
        for (double a : radii)
            if (a != radii[0]) return false;
        return true;
    }

    double min_semiaxis() const {
        double m = radii[0];
        for (double a : radii) m = std::min(m, a);
        return m;
    }

    //! Map a unit vector to the surface point center + diag(radii) xi.
    Vec point(const Vec& xi) const {
        Vec x(center);
        for (int i = 0; i < dim(); ++i) x[i] += radii[i] * xi[i];
        return x;
    }

    //! Level value F(x) = sum ((x_i-c_i)/a_i)^2; the surface is F = 1.
    double level(const Vec& x) const {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            const double t = (x[i] - center[i]) / radii[i];
            s += t * t;
        }
        return s;
    }

    bool contains(const Vec& x) const { return level(x) < 1.0; }

    //! Lower bound on the distance from x to the surface; exact for spheres.
    double boundary_distance(const Vec& x) const {
        return std::abs(std::sqrt(level(x)) - 1.0) * min_semiaxis();
    }

    //! Outward unit normal at the surface point with pullback coordinate xi.
    Vec outward_normal(const Vec& xi) const {
        Vec nrm(dim());
        for (int i = 0; i < dim(); ++i) nrm[i] = xi[i] / radii[i];
        const double len = norm(nrm);
        for (auto& v : nrm) v /= len;
        return nrm;
    }

    //! Flat area element relative to the unit sphere at pullback point xi:
    //! dS_surface = det(diag(radii)) * |diag(1/radii) xi| dS_unit.
    double area_element(const Vec& xi) const {
        double det = 1.0;
        for (double a : radii) det *= a;
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            const double t = xi[i] / radii[i];
            s += t * t;
        }
        return det * std::sqrt(s);
    }
};

//! Integral over the surface of h(x); h sees embedded points.
template <class F>
double integrate_surface(const SurfaceSpec& s, const numerics::SphereRule& rule, F&& h) {
    if (rule.n != s.dim())
        throw std::invalid_argument("integrate_surface: rule dimension mismatch");
    std::vector<double> terms(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const Vec xi = rule.node(k);
        terms[k] = rule.weights[k] * s.area_element(xi) * h(s.point(xi));
    }
    return numerics::pairwise_sum(terms);
}

//! Integral over the surface of h(x, outward unit normal).
template <class F>
double integrate_surface_with_normal(const SurfaceSpec& s, const numerics::SphereRule& rule,
                                     F&& h) {
    if (rule.n != s.dim())
        throw std::invalid_argument("integrate_surface_with_normal: rule dimension mismatch");
    std::vector<double> terms(rule.size());
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const Vec xi = rule.node(k);
        terms[k] = rule.weights[k] * s.area_element(xi) * h(s.point(xi), s.outward_normal(xi));
    }
    return numerics::pairwise_sum(terms);
}

inline double surface_area(const SurfaceSpec& s, const numerics::SphereRule& rule) {
    return integrate_surface(s, rule, [](const Vec&) { return 1.0; });
}

} // namespace afmass::metrics
