#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"
#include "afmass/metrics/surfaces.hpp"
#include "afmass/numerics/derivatives.hpp"

namespace afmass::metrics {

//! Graph metric g_ij = delta_ij + f_i f_j on flat n-space minus an optional
//! excluded open region (disjoint balls/ellipsoids). The graph function is
//! defined on the base chart; all curvature formulas stay in that chart.
class GraphMetric {
public:
    GraphMetric(int n, fields::FieldPtr f, std::vector<SurfaceSpec> excluded = {})
        : n_(n), f_(std::move(f)), excluded_(std::move(excluded)) {
        check_dim(n, 3, 9, "GraphMetric");
        if (f_->dim() != n) throw std::invalid_argument("GraphMetric: graph dimension mismatch");
        for (const auto& s : excluded_)
            if (s.dim() != n) throw std::invalid_argument("GraphMetric: region dimension mismatch");
    }

    int dim() const { return n_; }
    const fields::ScalarField& graph_field() const { return *f_; }
    const fields::FieldPtr& graph_ptr() const { return f_; }
    const std::vector<SurfaceSpec>& excluded() const { return excluded_; }

    bool in_domain(const Vec& x) const {
        for (const auto& s : excluded_)
            if (s.contains(x)) return false;
        return true;
    }

    Mat components(const Vec& x, const numerics::DiffScheme& scheme) const {
        const Vec g = numerics::gradient(*f_, x, scheme);
        Mat m(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) m(i, j) = (i == j ? 1.0 : 0.0) + g[i] * g[j];
        return m;
    }

    //! det g = 1 + |grad f|^2 (matrix determinant lemma, exact).
    double det_components(const Vec& x, const numerics::DiffScheme& scheme) const {
        const Vec g = numerics::gradient(*f_, x, scheme);
        return 1.0 + dot(g, g);
    }

    //! dV_g / dV_delta = sqrt(1 + |grad f|^2).
    double volume_element(const Vec& x, const numerics::DiffScheme& scheme) const {
        return std::sqrt(det_components(x, scheme));
    }

    //! Check the boundary hypotheses on each excluded component: the graph
    //! function vanishes on the boundary surface and its gradient blows up on
    //! an approach sequence from outside. Throws std::invalid_argument naming
    //! the failed hypothesis; returns normally when all components pass.
    // zero_tol must sit above sqrt(ulp) scale: a square-root profile maps a
    // last-bit rounding of the node radius to a boundary value of order 1e-7.
    void check_boundary_hypotheses(const numerics::SphereRule& rule,
                                   double zero_tol = 1e-6) const {
        for (const auto& s : excluded_) {
            double worst = 0.0;
            for (std::size_t k = 0; k < rule.size(); ++k)
                worst = std::max(worst, std::abs(f_->value(s.point(rule.node(k)))));
            if (worst > zero_tol)
                throw std::invalid_argument(
                    "GraphMetric: graph function does not vanish on a boundary component");
            // Gradient blow-up along the outward normal at a few boundary points.
            for (std::size_t k = 0; k < rule.size(); k += std::max<std::size_t>(1, rule.size() / 8)) {
                const Vec xi = rule.node(k);
                const Vec base = s.point(xi);
                const Vec nrm = s.outward_normal(xi);
                double prev = 0.0;
                bool growing = true;
                for (int j = 3; j >= 1; --j) { // distances 8h, 4h, 2h with h ~ semiaxis/256
                    const double d = s.min_semiaxis() / 256.0 * (1 << j);
                    const Vec y = base + d * nrm;
                    const double slope = std::abs((f_->value(y) - f_->value(base)) / d);
                    if (slope <= prev) growing = false; // must grow strictly toward the boundary
                    prev = slope;
                }
                if (!growing || prev < 1.0)
                    throw std::invalid_argument(
                        "GraphMetric: gradient does not blow up at a boundary component");
            }
        }
    }

private:
    int n_;
    fields::FieldPtr f_;
    std::vector<SurfaceSpec> excluded_;
};

} // namespace afmass::metrics
