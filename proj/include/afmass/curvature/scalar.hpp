#pragma once

#include <cmath>
#include <stdexcept>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/derivatives.hpp"

namespace afmass::curvature {

//! Scalar curvature of the conformally flat metric g = u^{4/(n-2)} delta:
//!   R = -(4(n-1)/(n-2)) u^{-(n+2)/(n-2)} Laplacian(u).
inline double scalar_curvature_conformal(const fields::ScalarField& u, int n, const Vec& x,
                                         const numerics::DiffScheme& scheme) {
    check_dim(n, 3, 9, "scalar_curvature_conformal");
    const double uv = u.value(x);
    if (uv <= 0.0)
        throw std::domain_error("scalar_curvature_conformal: conformal factor not positive");
    const double lap = numerics::laplacian(u, x, scheme);
    const double c = 4.0 * (n - 1.0) / (n - 2.0);
    return -c * std::pow(uv, -(n + 2.0) / (n - 2.0)) * lap;
}

//! Scalar curvature of the graph metric delta + df tensor df on the base chart:
//!   R = (1/W2) [ (tr h)^2 - |h|^2 - (2/W2) f_j f_k ((tr h) h_jk - (h^2)_jk) ]
//! with h the Euclidean Hessian of f and W2 = 1 + |grad f|^2.
inline double scalar_curvature_graph(const fields::ScalarField& f, const Vec& x,
                                     const numerics::DiffScheme& scheme) {
    const int n = f.dim();
    const Vec g1 = numerics::gradient(f, x, scheme);
    const Mat h = numerics::hessian(f, x, scheme);
    const double w2 = 1.0 + dot(g1, g1);
    double lap = 0.0, hs2 = 0.0;
    for (int i = 0; i < n; ++i) {
        lap += h(i, i);
        for (int j = 0; j < n; ++j) hs2 += h(i, j) * h(i, j);
    }
    double cross = 0.0; // f_j f_k ((tr h) h_jk - (h^2)_jk)
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double h2jk = 0.0;
            for (int i = 0; i < n; ++i) h2jk += h(i, j) * h(i, k);
            cross += g1[j] * g1[k] * (lap * h(j, k) - h2jk);
        }
    return (lap * lap - hs2 - 2.0 * cross / w2) / w2;
}

//! Divergence-form flux field of the graph curvature:
//!   V_j = (1/W2) ((tr h) f_j - h_jk f_k).
inline Vec lam_flux(const fields::ScalarField& f, const Vec& x,
                    const numerics::DiffScheme& scheme) {
    const int n = f.dim();
    const Vec g1 = numerics::gradient(f, x, scheme);
    const Mat h = numerics::hessian(f, x, scheme);
    const double w2 = 1.0 + dot(g1, g1);
    double lap = 0.0;
    for (int i = 0; i < n; ++i) lap += h(i, i);
    Vec v(n);
    for (int j = 0; j < n; ++j) {
        double hjk = 0.0;
        for (int k = 0; k < n; ++k) hjk += h(j, k) * g1[k];
        v[j] = (lap * g1[j] - hjk) / w2;
    }
    return v;
}

//! |div V - R| at x. With analytic derivatives the divergence is expanded by
//! the quotient rule, keeping the two third-derivative contractions that the
//! identity cancels; with finite differences the flux field itself is
//! differenced, which is an independent numerical path. The outer stencil is
//! fourth order: the flux carries second-difference curvature already, so a
//! second-order divergence would sit on an O(h^2) truncation floor above the
//! inner rounding noise.
inline double lam_identity_residual(const fields::ScalarField& f, const Vec& x,
                                    const numerics::DiffScheme& scheme) {
    const int n = f.dim();
    const double r_val = scalar_curvature_graph(f, x, scheme);
    double div = 0.0;
    if (scheme.mode == numerics::DiffScheme::Mode::analytic) {
        numerics::detail::require_analytic(f, "lam_identity_residual");
        const Vec g1 = f.gradient(x);
        const Mat h = f.hessian(x);
        const Ten3 t = f.third(x);
        const double w2 = 1.0 + dot(g1, g1);
        double lap = 0.0, hs2 = 0.0;
        for (int i = 0; i < n; ++i) {
            lap += h(i, i);
            for (int j = 0; j < n; ++j) hs2 += h(i, j) * h(i, j);
        }
        // d_j N_j with N_j = (tr h) f_j - h_jk f_k; the two contractions of
        // the third-derivative tensor enter with opposite signs.
        double third_a = 0.0, third_b = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                third_a += t(i, i, j) * g1[j];
                third_b += t(i, j, j) * g1[i];
            }
        const double div_n = third_a + lap * lap - third_b - hs2;
        // N_j d_j(W2) = 2 f_k h_kj N_j.
        double nd = 0.0;
        for (int j = 0; j < n; ++j) {
            double nj = lap * g1[j];
            for (int k = 0; k < n; ++k) nj -= h(j, k) * g1[k];
            double dj = 0.0;
            for (int k = 0; k < n; ++k) dj += 2.0 * g1[k] * h(k, j);
            nd += nj * dj;
        }
        div = div_n / w2 - nd / (w2 * w2);
    } else {
        const double h3 = scheme.step(3, x);
        for (int j = 0; j < n; ++j) {
            Vec xp(x), xm(x), xpp(x), xmm(x);
            xp[j] += h3;
            xm[j] -= h3;
            xpp[j] += 2.0 * h3;
            xmm[j] -= 2.0 * h3;
            const double vp = lam_flux(f, xp, scheme)[j];
            const double vm = lam_flux(f, xm, scheme)[j];
            const double vpp = lam_flux(f, xpp, scheme)[j];
            const double vmm = lam_flux(f, xmm, scheme)[j];
            div += (-vpp + 8.0 * vp - 8.0 * vm + vmm) / (12.0 * h3);
        }
    }
    return std::abs(div - r_val);
}

//! Energy density seen by the constant-time slice: mu = R / (2(n-1) omega_{n-1}).
inline double energy_density(double scalar_curvature, int n) {
    check_dim(n, 3, 9, "energy_density");
    return scalar_curvature / (2.0 * (n - 1.0) * numerics::unit_sphere_measure(n));
}

} // namespace afmass::curvature
