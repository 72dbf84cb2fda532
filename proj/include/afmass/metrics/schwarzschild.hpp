#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/fields/builtin.hpp"
#include "afmass/numerics/constants.hpp"

namespace afmass::metrics {

//! Closed-form geometric data of the spherically symmetric vacuum family in
//! the conformally flat chart: u = 1 + m/(2 r^{n-2}).
//!   - m > 0: minimal sphere (neck) at r0 = (m/2)^{1/(n-2)}, horizon area
//!     A = omega (2m)^{(n-1)/(n-2)}, reflection isometry r -> r0^2/r.
//!   - m < 0: the factor vanishes at r_b = (|m|/2)^{1/(n-2)}; that inner
//!     sphere has zero area in g (the model zero area singularity).
class SchwarzschildGeometry {
public:
    SchwarzschildGeometry(double m, int n) : m_(m), n_(n) {
        check_dim(n, 3, 9, "SchwarzschildGeometry");
    }

    double mass() const { return m_; }
    int dim() const { return n_; }

    bool has_horizon() const { return m_ > 0.0; }

    double horizon_conformal_radius() const {
        require_horizon("horizon_conformal_radius");
        return std::pow(m_ / 2.0, 1.0 / (n_ - 2.0));
    }

    double horizon_area() const {
        require_horizon("horizon_area");
        return numerics::unit_sphere_measure(n_) *
               std::pow(2.0 * m_, (n_ - 1.0) / (n_ - 2.0));
    }

    //! Inner chart boundary: 0 for m >= 0, the factor's zero sphere for m < 0.
    double inner_radius() const {
        return m_ < 0.0 ? std::pow(-m_ / 2.0, 1.0 / (n_ - 2.0)) : 0.0;
    }

    double factor(double r) const {
        if (r <= 0.0) throw std::domain_error("SchwarzschildGeometry: r must be positive");
        if (m_ < 0.0 && r < inner_radius())
            throw std::domain_error("SchwarzschildGeometry: inside the factor's zero sphere");
        return 1.0 + m_ / (2.0 * std::pow(r, n_ - 2.0));
    }

    //! Area radius of the coordinate r-sphere: R(r) = r u(r)^{2/(n-2)}.
    double area_radius(double r) const {
        return r * std::pow(factor(r), 2.0 / (n_ - 2.0));
    }

    fields::FieldPtr factor_field() const { return fields::schwarzschild_conformal_factor(m_, n_); }

private:
    void require_horizon(const char* op) const {
        if (!has_horizon())
            throw std::domain_error(std::string("SchwarzschildGeometry::") + op +
                                    ": no horizon for m <= 0");
    }

    double m_;
    int n_;
};

//! Max-norm difference between the metric at x and the pullback of the metric
//! under the sphere inversion x -> r0^2 x/|x|^2. Numerically zero certifies
//! the reflection isometry; computed through the full Jacobian product, not
//! the simplified radial identity, so it is an independent check.
inline double inversion_pullback_residual(double m, int n, const Vec& x) {
    if (m <= 0.0)
        throw std::domain_error("inversion_pullback_residual: needs the m > 0 two-ended chart");
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("inversion_pullback_residual: point dimension mismatch");
    const double r = norm(x);
    if (r <= 0.0) throw std::domain_error("inversion_pullback_residual: x must be nonzero");
    const SchwarzschildGeometry geo(m, n);
    const double r0 = geo.horizon_conformal_radius();
    const double c = 4.0 / (n - 2.0);

    // Image point and Jacobian J_ij = (r0^2/r^2)(delta_ij - 2 xh_i xh_j).
    const double s = r0 * r0 / (r * r);
    Vec y = s * x;
    Mat jac(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            jac(i, j) = s * ((i == j ? 1.0 : 0.0) - 2.0 * x[i] * x[j] / (r * r));

    const double gy = std::pow(geo.factor(norm(y)), c); // g at the image is gy * delta
    const double gx = std::pow(geo.factor(r), c);

    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double pij = 0.0; // (J^T (gy delta) J)_ij
            for (int k = 0; k < n; ++k) pij += jac(k, i) * gy * jac(k, j);
            worst = std::max(worst, std::abs(pij - (i == j ? gx : 0.0)));
        }
    return worst;
}

//! Rotationally symmetric embedding profile R(w) of the spatial slice, as a
//! surface of revolution in flat (n+1)-space for m > 0 and in Minkowski space
//! (timelike revolution axis) for m < 0:
//!   (dR/dw)^2 = R^{n-2}/(2|m|) - sign(m).
//! Closed forms in n = 3; a dense fourth-order ODE table otherwise, started
//! at the neck (m > 0) or the tip (m < 0). For n >= 5 the profile reaches
//! infinite R at finite w, so the table stops adaptively.
class EmbeddingProfile {
public:
    EmbeddingProfile(double m, int n, double w_max = 8.0, int steps_per_unit = 2048)
        : m_(m), n_(n) {
        check_dim(n, 3, 9, "EmbeddingProfile");
        if (m == 0.0)
            throw std::domain_error("EmbeddingProfile: the m = 0 member is a flat plane, "
                                    "no profile to integrate");
        w_max_ = w_max;
        if (n_ == 3) return; // closed form, no table
        const int steps = static_cast<int>(w_max * steps_per_unit);
        h_ = w_max / steps;
        table_R_.reserve(steps + 1);
        table_dR_.reserve(steps + 1);
        // Initial data: neck R = (2m)^{1/(n-2)}, R' = 0 for m > 0; else tip R = 0, R' = 1.
        double R = m_ > 0.0 ? std::pow(2.0 * m_, 1.0 / (n_ - 2.0)) : 0.0;
        double dR = m_ > 0.0 ? 0.0 : 1.0;
        table_R_.push_back(R);
        table_dR_.push_back(dR);
        for (int k = 0; k < steps; ++k) {
            step_rk4(R, dR);
            if (!std::isfinite(R) || R > 1e8) break; // finite-w blowup for n >= 5
            table_R_.push_back(R);
            table_dR_.push_back(dR);
        }
        w_max_ = h_ * (table_R_.size() - 1);
    }

    //! Largest |w| the profile can be evaluated at.
    double w_limit() const { return w_max_; }

    double value(double w) const {
        const double aw = std::abs(w); // profile is even in w for m > 0
        if (n_ == 3)
            return m_ > 0.0 ? aw * aw / (8.0 * m_) + 2.0 * m_
                            : aw * aw / (8.0 * -m_) - 2.0 * -m_;
        return interpolate(table_R_, aw);
    }

    double slope(double w) const {
        const double aw = std::abs(w);
        double d;
        if (n_ == 3)
            d = m_ > 0.0 ? aw / (4.0 * m_) : aw / (4.0 * -m_);
        else
            d = interpolate(table_dR_, aw);
        return w < 0.0 ? -d : d;
    }

    //! |(dR/dw)^2 - (R^{n-2}/(2|m|) - sign(m))| at w.
    double residual(double w) const {
        const double R = value(w);
        const double d = slope(w);
        const double rhs = std::pow(R, n_ - 2.0) / (2.0 * std::abs(m_)) - (m_ > 0.0 ? 1.0 : -1.0);
        return std::abs(d * d - rhs);
    }

    //! Induced-metric check: the revolution hypersurface over the profile has
    //! radial component 1 + (dw/dR)^2 (m > 0, Euclidean ambient) or
    //! 1 - (dw/dR)^2 (m < 0, Minkowski ambient), either of which must equal
    //! the area-radius chart component 1/(1 - 2m/R^{n-2}).
    double induced_metric_defect(double w) const {
        const double R = value(w);
        const double d = slope(w);
        if (d == 0.0) return 0.0; // neck: both sides blow up, nothing to compare
        const double induced = 1.0 + (m_ > 0.0 ? 1.0 : -1.0) / (d * d);
        const double exact = 1.0 / (1.0 - 2.0 * m_ / std::pow(R, n_ - 2.0));
        return std::abs(induced - exact);
    }

private:
    double rhs_second(double R) const {
        // R'' = (n-2) R^{n-3} / (4|m|), from differentiating the first-order form.
        return (n_ - 2.0) * std::pow(R, n_ - 3.0) / (4.0 * std::abs(m_));
    }

    void step_rk4(double& R, double& dR) {
        const double k1R = dR, k1V = rhs_second(R);
        const double k2R = dR + 0.5 * h_ * k1V, k2V = rhs_second(R + 0.5 * h_ * k1R);
        const double k3R = dR + 0.5 * h_ * k2V, k3V = rhs_second(R + 0.5 * h_ * k2R);
        const double k4R = dR + h_ * k3V, k4V = rhs_second(R + h_ * k3R);
        R += h_ / 6.0 * (k1R + 2.0 * k2R + 2.0 * k3R + k4R);
        dR += h_ / 6.0 * (k1V + 2.0 * k2V + 2.0 * k3V + k4V);
    }

    double interpolate(const std::vector<double>& table, double w) const {
        if (w > w_max_)
            throw std::domain_error("EmbeddingProfile: w beyond the integrated range");
        const double t = w / h_;
        const std::size_t k0 = std::min(table.size() - 2, static_cast<std::size_t>(t));
        // Cubic through four consecutive samples keeps interpolation error
        // far below the RK4 table error.
        const std::size_t kA = k0 == 0 ? 0 : k0 - 1;
        const std::size_t kB = std::min(table.size() - 1, kA + 3);
        double out = 0.0;
        for (std::size_t i = kA; i <= kB; ++i) {
            double term = table[i];
            for (std::size_t j = kA; j <= kB; ++j)
                if (j != i) term *= (t - j) / (static_cast<double>(i) - static_cast<double>(j));
            out += term;
        }
        return out;
    }

    double m_;
    int n_;
    double h_ = 0.0;
    double w_max_ = 0.0;
    std::vector<double> table_R_, table_dR_;
};

} // namespace afmass::metrics
