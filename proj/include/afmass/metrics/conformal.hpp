#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"
#include "afmass/metrics/surfaces.hpp"
#include "afmass/numerics/sphere_rule.hpp"

namespace afmass::metrics {

//! Conformally flat metric g = u^{4/(n-2)} delta on flat n-space, optionally
//! minus a closed ball. The factor must stay positive on the domain interior;
//! it may vanish on the inner boundary (that sphere is then infinitely far
//! away in g, the zero-area-singularity situation).
class ConformalMetric {
public:
    ConformalMetric(int n, fields::FieldPtr u, std::optional<SurfaceSpec> excluded = {})
        : n_(n), u_(std::move(u)), excluded_(std::move(excluded)) {
        check_dim(n, 3, 9, "ConformalMetric");
        if (u_->dim() != n) throw std::invalid_argument("ConformalMetric: factor dimension mismatch");
        if (excluded_ && excluded_->shape != SurfaceSpec::Shape::sphere)
            throw std::invalid_argument("ConformalMetric: excluded region must be a ball");
    }

    int dim() const { return n_; }
    const fields::ScalarField& factor_field() const { return *u_; }
    const fields::FieldPtr& factor_ptr() const { return u_; }
    const std::optional<SurfaceSpec>& excluded() const { return excluded_; }

    bool in_domain(const Vec& x) const { return !(excluded_ && excluded_->contains(x)); }

    //! Conformal factor value with the positivity contract enforced.
    double factor(const Vec& x) const {
        const double v = u_->value(x);
        if (v <= 0.0)
            throw std::domain_error("ConformalMetric: conformal factor is not positive here");
        return v;
    }

    //! g_ij(x) = u^{4/(n-2)} delta_ij.
    Mat components(const Vec& x) const {
        const double c = std::pow(factor(x), 4.0 / (n_ - 2.0));
        Mat g(n_);
        for (int i = 0; i < n_; ++i) g(i, i) = c;
        return g;
    }

    //! dV_g / dV_delta = u^{2n/(n-2)}.
    double volume_element(const Vec& x) const {
        return std::pow(factor(x), 2.0 * n_ / (n_ - 2.0));
    }

    //! dA_g / dA_delta on any hypersurface = u^{2(n-1)/(n-2)}.
    double area_element(const Vec& x) const {
        return std::pow(factor(x), 2.0 * (n_ - 1.0) / (n_ - 2.0));
    }

    //! g-length scaling of a flat unit vector = u^{2/(n-2)}.
    double length_element(const Vec& x) const {
        return std::pow(factor(x), 2.0 / (n_ - 2.0));
    }

    //! Area of the coordinate r-sphere about the origin, measured in g.
    double sphere_area(double r, const numerics::SphereRule& rule) const {
        return numerics::integrate_sphere(rule, Vec(n_, 0.0), r,
                                          [&](const Vec& x) { return area_element(x); });
    }

private:
    int n_;
    fields::FieldPtr u_;
    std::optional<SurfaceSpec> excluded_;
};

} // namespace afmass::metrics
