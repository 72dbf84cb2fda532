#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "afmass/core.hpp"

namespace afmass::fields {

//! A scalar function on (a subset of) flat n-space. Implementations may carry
//! exact derivative evaluators; otherwise callers fall back to finite
//! differences (numerics module). Fields declare their decay exponent p and,
//! where applicable, a singular set so difference stencils can keep clear.
class ScalarField {
public:
    explicit ScalarField(int n) : n_(n) { check_dim(n, 1, 9, "ScalarField"); }
    virtual ~ScalarField() = default;

    int dim() const { return n_; }

    virtual double value(const Vec& x) const = 0;

    virtual bool has_analytic_derivatives() const { return false; }
    virtual Vec gradient(const Vec&) const {
        throw std::logic_error("ScalarField: no analytic gradient for this field");
    }
    virtual Mat hessian(const Vec&) const {
        throw std::logic_error("ScalarField: no analytic hessian for this field");
    }
    virtual Ten3 third(const Vec&) const {
        throw std::logic_error("ScalarField: no analytic third partials for this field");
    }

    //! Distance from x to the field's singular set; +inf when the field is
    //! regular everywhere.
    virtual double singular_distance(const Vec&) const {
        return std::numeric_limits<double>::infinity();
    }

    //! Declared decay rate p: |partials| fall off like |x|^{-p-order+1} at infinity.
    double decay_exponent() const { return decay_; }
    void declare_decay(double p) { decay_ = p; }

private:
    int n_;
    double decay_ = 0.0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

//! Value-only field from a callable; no analytic derivatives.
class LambdaField final : public ScalarField {
public:
    LambdaField(int n, std::function<double(const Vec&)> fn)
        : ScalarField(n), fn_(std::move(fn)) {}
    double value(const Vec& x) const override { return fn_(x); }

private:
    std::function<double(const Vec&)> fn_;
};

class ConstantField final : public ScalarField {
public:
    ConstantField(int n, double c) : ScalarField(n), c_(c) { declare_decay(0.0); }
    double value(const Vec&) const override { return c_; }
    bool has_analytic_derivatives() const override { return true; }
    Vec gradient(const Vec&) const override { return Vec(dim(), 0.0); }
    Mat hessian(const Vec&) const override { return Mat(dim()); }
    Ten3 third(const Vec&) const override { return Ten3(dim()); }

private:
    double c_;
};

//! Radial profile with closed-form derivatives, optionally off-center and
//! piecewise (segment boundaries listed in `seams`, profiles right-open).
//! Partials follow from the chain rule on rho = |x - c|:
//!   grad = U' xh,   hess = U'' xh xh + (U'/rho)(I - xh xh),
//!   third tensor written out below (checked against r^2, r^3 by hand).
struct RadialProfile {
    std::function<double(double)> u, du, d2u, d3u;
};

class RadialField final : public ScalarField {
public:
    RadialField(int n, RadialProfile profile, double r_min = 0.0, Vec center = {},
                bool singular_center = false)
        : ScalarField(n),
          segments_{std::move(profile)},
          seams_{},
          r_min_(r_min),
          center_(center.empty() ? Vec(n, 0.0) : std::move(center)),
          singular_center_(singular_center) {}

    //! Piecewise profile: segment k applies on [seams[k-1], seams[k]).
    RadialField(int n, std::vector<RadialProfile> segments, std::vector<double> seams,
                double r_min = 0.0, Vec center = {}, bool singular_center = false)
        : ScalarField(n),
          segments_(std::move(segments)),
          seams_(std::move(seams)),
          r_min_(r_min),
          center_(center.empty() ? Vec(n, 0.0) : std::move(center)),
          singular_center_(singular_center) {}

    double r_min() const { return r_min_; }
    const Vec& center() const { return center_; }
    const std::vector<double>& seams() const { return seams_; }

    double radius_of(const Vec& x) const { return norm(x - center_); }

    double profile_value(double r) const { return seg(r).u(r); }
    double profile_d1(double r) const { return seg(r).du(r); }
    double profile_d2(double r) const { return seg(r).d2u(r); }
    double profile_d3(double r) const { return seg(r).d3u(r); }

    double value(const Vec& x) const override { return profile_value(checked_radius(x)); }

    bool has_analytic_derivatives() const override { return true; }

    Vec gradient(const Vec& x) const override {
        const double r = checked_radius(x);
        const double c = profile_d1(r) / r;
        Vec g(dim());
        for (int i = 0; i < dim(); ++i) g[i] = c * (x[i] - center_[i]);
        return g;
    }

    Mat hessian(const Vec& x) const override {
        const double r = checked_radius(x);
        const double d1 = profile_d1(r), d2 = profile_d2(r);
        Mat h(dim());
        for (int i = 0; i < dim(); ++i) {
            const double xi = (x[i] - center_[i]) / r;
            for (int j = 0; j < dim(); ++j) {
                const double xj = (x[j] - center_[j]) / r;
                h(i, j) = d2 * xi * xj + (d1 / r) * ((i == j ? 1.0 : 0.0) - xi * xj);
            }
        }
        return h;
    }

    Ten3 third(const Vec& x) const override {
        const double r = checked_radius(x);
        const double d1 = profile_d1(r), d2 = profile_d2(r), d3 = profile_d3(r);
        const double ca = d3 - 3.0 * d2 / r + 3.0 * d1 / (r * r);
        const double cb = d2 / r - d1 / (r * r);
        Ten3 t(dim());
        Vec xh(dim());
        for (int i = 0; i < dim(); ++i) xh[i] = (x[i] - center_[i]) / r;
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j)
                for (int k = 0; k < dim(); ++k) {
                    double v = ca * xh[i] * xh[j] * xh[k];
                    if (i == j) v += cb * xh[k];
                    if (i == k) v += cb * xh[j];
                    if (j == k) v += cb * xh[i];
                    t(i, j, k) = v;
                }
        return t;
    }

    double singular_distance(const Vec& x) const override {
        const double r = radius_of(x);
        double d = std::numeric_limits<double>::infinity();
        if (r_min_ > 0.0) d = std::abs(r - r_min_);
        else if (singular_center_) d = r;
        return d;
    }

private:
    const RadialProfile& seg(double r) const {
        std::size_t k = 0;
        while (k < seams_.size() && r >= seams_[k]) ++k;
        return segments_[k];
    }
    double checked_radius(const Vec& x) const {
        const double r = radius_of(x);
        if (r < r_min_) {
            // Quadrature nodes meant to sit exactly on the boundary sphere can
            // land a few ulps inside; snap those onto it instead of rejecting.
            if (r > r_min_ * (1.0 - 1e-12)) return r_min_;
            throw std::domain_error("RadialField: point inside the excluded radius");
        }
        return r;
    }

    std::vector<RadialProfile> segments_;
    std::vector<double> seams_;
    double r_min_;
    Vec center_;
    bool singular_center_;
};

//! Pointwise sum of fields; derivatives sum when every part has them.
class SumField final : public ScalarField {
public:
    SumField(int n, std::vector<FieldPtr> parts) : ScalarField(n), parts_(std::move(parts)) {
        for (const auto& p : parts_)
            if (p->dim() != n) throw std::invalid_argument("SumField: dimension mismatch");
    }

    double value(const Vec& x) const override {
        double s = 0.0;
        for (const auto& p : parts_) s += p->value(x);
        return s;
    }

    bool has_analytic_derivatives() const override {
        for (const auto& p : parts_)
            if (!p->has_analytic_derivatives()) return false;
        return true;
    }

    Vec gradient(const Vec& x) const override {
        Vec g(dim(), 0.0);
        for (const auto& p : parts_) {
            Vec gp = p->gradient(x);
            for (int i = 0; i < dim(); ++i) g[i] += gp[i];
        }
        return g;
    }

    Mat hessian(const Vec& x) const override {
        Mat h(dim());
        for (const auto& p : parts_) {
            Mat hp = p->hessian(x);
            for (std::size_t i = 0; i < h.a.size(); ++i) h.a[i] += hp.a[i];
        }
        return h;
    }

    Ten3 third(const Vec& x) const override {
        Ten3 t(dim());
        for (const auto& p : parts_) {
            Ten3 tp = p->third(x);
            for (std::size_t i = 0; i < t.a.size(); ++i) t.a[i] += tp.a[i];
        }
        return t;
    }

    double singular_distance(const Vec& x) const override {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& p : parts_) d = std::min(d, p->singular_distance(x));
        return d;
    }

private:
    std::vector<FieldPtr> parts_;
};

//! Pointwise product of two fields; derivatives by the Leibniz rule up to
//! third order.
class ProductField final : public ScalarField {
public:
    ProductField(FieldPtr a, FieldPtr b) : ScalarField(a->dim()), a_(std::move(a)), b_(std::move(b)) {
        if (a_->dim() != b_->dim()) throw std::invalid_argument("ProductField: dimension mismatch");
    }

    double value(const Vec& x) const override { return a_->value(x) * b_->value(x); }

    bool has_analytic_derivatives() const override {
        return a_->has_analytic_derivatives() && b_->has_analytic_derivatives();
    }

    Vec gradient(const Vec& x) const override {
        const double av = a_->value(x), bv = b_->value(x);
        const Vec ag = a_->gradient(x), bg = b_->gradient(x);
        Vec g(dim());
        for (int i = 0; i < dim(); ++i) g[i] = ag[i] * bv + av * bg[i];
        return g;
    }

    Mat hessian(const Vec& x) const override {
        const double av = a_->value(x), bv = b_->value(x);
        const Vec ag = a_->gradient(x), bg = b_->gradient(x);
        const Mat ah = a_->hessian(x), bh = b_->hessian(x);
        Mat h(dim());
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j)
                h(i, j) = ah(i, j) * bv + ag[i] * bg[j] + ag[j] * bg[i] + av * bh(i, j);
        return h;
    }

    Ten3 third(const Vec& x) const override {
        const double av = a_->value(x), bv = b_->value(x);
        const Vec ag = a_->gradient(x), bg = b_->gradient(x);
        const Mat ah = a_->hessian(x), bh = b_->hessian(x);
        const Ten3 at = a_->third(x), bt = b_->third(x);
        Ten3 t(dim());
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j)
                for (int k = 0; k < dim(); ++k)
                    t(i, j, k) = at(i, j, k) * bv + ah(i, j) * bg[k] + ah(i, k) * bg[j] +
                                 ah(j, k) * bg[i] + ag[i] * bh(j, k) + ag[j] * bh(i, k) +
                                 ag[k] * bh(i, j) + av * bt(i, j, k);
        return t;
    }

    double singular_distance(const Vec& x) const override {
        return std::min(a_->singular_distance(x), b_->singular_distance(x));
    }

private:
    FieldPtr a_, b_;
};

} // namespace afmass::fields
