#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"

namespace afmass::numerics {

//! Differentiation policy: exact evaluators where the field provides them,
//! or central differences with per-order steps scaled by max(1, |x|).
struct DiffScheme {
    enum class Mode { analytic, central_fd };
    Mode mode = Mode::analytic;
    double h1 = 1e-5;
    double h2 = 1e-4;
    double h3 = 1e-3;

    double step(int order, const Vec& x) const {
        const double s = std::max(1.0, norm(x));
        switch (order) {
            case 1: return h1 * s;
            case 2: return h2 * s;
            case 3: return h3 * s;
            default: throw std::invalid_argument("DiffScheme: order must be 1, 2, or 3");
        }
    }

    static DiffScheme analytic_scheme() { return DiffScheme{}; }
    static DiffScheme fd_scheme() { return DiffScheme{Mode::central_fd, 1e-5, 1e-4, 1e-3}; }

    //! Steps for differencing a quantity that is itself a central-difference
    //! result. The wider second-order step shrinks the inner rounding noise
    //! (which scales as 1/h2^2) so the outer stencil does not amplify it.
    static DiffScheme nested_fd_scheme() { return DiffScheme{Mode::central_fd, 1e-5, 3e-4, 1e-3}; }
};

// Central stencils on a raw callable. Error O(h^2) per order; with the default
// steps this keeps degree-3 polynomials exact to ~1e-10 and never worse than
// the documented 1e-7 budget at unit scale.
template <class F>
Vec fd_gradient(F&& f, Vec x, double h) {
    const int n = static_cast<int>(x.size());
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

template <class F>
Mat fd_hessian(F&& f, Vec x, double h) {
    const int n = static_cast<int>(x.size());
    Mat m(n);
    const double f0 = f(x);
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        m(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double xi = x[i], xj = x[j];
            x[i] = xi + h; x[j] = xj + h;
            const double fpp = f(x);
            x[j] = xj - h;
            const double fpm = f(x);
            x[i] = xi - h; x[j] = xj + h;
            const double fmp = f(x);
            x[j] = xj - h;
            const double fmm = f(x);
            x[i] = xi; x[j] = xj;
            m(i, j) = m(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    return m;
}

template <class F>
Ten3 fd_third(F&& f, Vec x, double h) {
    const int n = static_cast<int>(x.size());
    Ten3 t(n);
    auto shift_eval = [&](int a, double da, int b, double db, int c, double dc) {
        Vec y = x;
        y[a] += da;
        if (b >= 0) y[b] += db;
        if (c >= 0) y[c] += dc;
        return f(y);
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                double v;
                if (i == j && j == k) {
                    v = (shift_eval(i, 2 * h, -1, 0, -1, 0) - 2.0 * shift_eval(i, h, -1, 0, -1, 0) +
                         2.0 * shift_eval(i, -h, -1, 0, -1, 0) - shift_eval(i, -2 * h, -1, 0, -1, 0)) /
                        (2.0 * h * h * h);
                } else if (i == j) { // f_iik, k distinct
                    auto dii = [&](double dk) {
                        return (shift_eval(i, h, k, dk, -1, 0) - 2.0 * shift_eval(i, 0, k, dk, -1, 0) +
                                shift_eval(i, -h, k, dk, -1, 0)) /
                               (h * h);
                    };
                    v = (dii(h) - dii(-h)) / (2.0 * h);
                } else if (j == k) { // f_ijj, i distinct
                    auto djj = [&](double di) {
                        return (shift_eval(j, h, i, di, -1, 0) - 2.0 * shift_eval(j, 0, i, di, -1, 0) +
                                shift_eval(j, -h, i, di, -1, 0)) /
                               (h * h);
                    };
                    v = (djj(h) - djj(-h)) / (2.0 * h);
                } else { // all distinct
                    v = (shift_eval(i, h, j, h, k, h) - shift_eval(i, h, j, h, k, -h) -
                         shift_eval(i, h, j, -h, k, h) - shift_eval(i, -h, j, h, k, h) +
                         shift_eval(i, h, j, -h, k, -h) + shift_eval(i, -h, j, h, k, -h) +
                         shift_eval(i, -h, j, -h, k, h) - shift_eval(i, -h, j, -h, k, -h)) /
                        (8.0 * h * h * h);
                }
                // fill all permutations of (i, j, k)
                t(i, j, k) = t(i, k, j) = t(j, i, k) = t(j, k, i) = t(k, i, j) = t(k, j, i) = v;
            }
    return t;
}

namespace detail {
inline void guard_singular(const fields::ScalarField& f, const Vec& x, double h, const char* op) {
    if (f.singular_distance(x) < 2.0 * h)
        throw std::domain_error(std::string(op) + ": stencil too close to the field's singular set");
}
inline void require_analytic(const fields::ScalarField& f, const char* op) {
    if (!f.has_analytic_derivatives())
        throw std::invalid_argument(std::string(op) +
                                    ": analytic mode requested for a field without exact derivatives");
}
} // namespace detail

inline Vec gradient(const fields::ScalarField& f, const Vec& x, const DiffScheme& scheme) {
    if (scheme.mode == DiffScheme::Mode::analytic) {
        detail::require_analytic(f, "gradient");
        return f.gradient(x);
    }
    const double h = scheme.step(1, x);
    detail::guard_singular(f, x, h, "gradient");
    return fd_gradient([&](const Vec& y) { return f.value(y); }, x, h);
}

inline Mat hessian(const fields::ScalarField& f, const Vec& x, const DiffScheme& scheme) {
    if (scheme.mode == DiffScheme::Mode::analytic) {
        detail::require_analytic(f, "hessian");
        return f.hessian(x);
    }
    const double h = scheme.step(2, x);
    detail::guard_singular(f, x, h, "hessian");
    return fd_hessian([&](const Vec& y) { return f.value(y); }, x, h);
}

inline Ten3 third_partials(const fields::ScalarField& f, const Vec& x, const DiffScheme& scheme) {
    if (scheme.mode == DiffScheme::Mode::analytic) {
        detail::require_analytic(f, "third_partials");
        return f.third(x);
    }
    const double h = scheme.step(3, x);
    detail::guard_singular(f, x, h, "third_partials");
    return fd_third([&](const Vec& y) { return f.value(y); }, x, h);
}

inline double laplacian(const fields::ScalarField& f, const Vec& x, const DiffScheme& scheme) {
    const Mat h = hessian(f, x, scheme);
    double s = 0.0;
    for (int i = 0; i < h.n; ++i) s += h(i, i);
    return s;
}

} // namespace afmass::numerics
