#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"
#include "afmass/metrics/surfaces.hpp"
#include "afmass/numerics/derivatives.hpp"
#include "afmass/numerics/sphere_rule.hpp"

namespace afmass::metrics {

//! Local resolution of a zero area singularity: a background metric
//! gbar = psi^{4/(n-2)} delta (flat when psi is absent) and a resolving
//! function phibar >= 0 vanishing exactly on the singular surface Sigma, with
//! g = phibar^{4/(n-2)} gbar away from Sigma. The singular mass is computed
//! from the normal derivative of phibar along the normal pointing into the
//! manifold (off the singular side).
class ZASResolution {
public:
    ZASResolution(int n, fields::FieldPtr phibar, SurfaceSpec sigma,
                  fields::FieldPtr psi = nullptr)
        : n_(n), phibar_(std::move(phibar)), sigma_(std::move(sigma)), psi_(std::move(psi)) {
        check_dim(n, 3, 9, "ZASResolution");
        if (phibar_->dim() != n)
            throw std::invalid_argument("ZASResolution: resolving function dimension mismatch");
        if (sigma_.dim() != n) throw std::invalid_argument("ZASResolution: surface dimension mismatch");
        if (psi_ && psi_->dim() != n)
            throw std::invalid_argument("ZASResolution: background factor dimension mismatch");
    }

    int dim() const { return n_; }
    const SurfaceSpec& sigma() const { return sigma_; }
    const fields::ScalarField& resolving_field() const { return *phibar_; }
    bool flat_background() const { return psi_ == nullptr; }

    double background_factor(const Vec& x) const {
        if (!psi_) return 1.0;
        const double v = psi_->value(x);
        if (v <= 0.0) throw std::domain_error("ZASResolution: background factor not positive");
        return v;
    }

    //! Area element of gbar on Sigma relative to the flat one: psi^{2(n-1)/(n-2)}.
    double background_area_element(const Vec& x) const {
        return std::pow(background_factor(x), 2.0 * (n_ - 1.0) / (n_ - 2.0));
    }

    //! nubar(phibar) at a surface point: derivative of the resolving function
    //! along the gbar-unit normal pointing into the manifold. For the
    //! supported surfaces the manifold side is the outside, so the flat
    //! direction is the outward normal scaled by psi^{-2/(n-2)}.
    double normal_derivative(const Vec& xi, const numerics::DiffScheme& scheme) const {
        const Vec x = sigma_.point(xi);
        const Vec nrm = sigma_.outward_normal(xi);
        const Vec grad = numerics::gradient(*phibar_, x, scheme);
        return dot(grad, nrm) / std::pow(background_factor(x), 2.0 / (n_ - 2.0));
    }

    //! Max |phibar| over surface quadrature nodes; the resolution contract
    //! demands this be ~0.
    double surface_residual(const numerics::SphereRule& rule) const {
        double worst = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k)
            worst = std::max(worst, std::abs(phibar_->value(sigma_.point(rule.node(k)))));
        return worst;
    }

private:
    int n_;
    fields::FieldPtr phibar_;
    SurfaceSpec sigma_;
    fields::FieldPtr psi_;
};

} // namespace afmass::metrics
