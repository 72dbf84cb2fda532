#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "afmass/core.hpp"
#include "afmass/fields/scalar_field.hpp"

namespace afmass::fields {

//! Multivariate polynomial with exact derivative tensors of every order.
//! The workhorse for identity checks: derivatives are combinatorial, so the
//! only rounding is in the final Horner-free accumulation.
class PolynomialField final : public ScalarField {
public:
    struct Term {
        double coeff;
        std::vector<int> expo; // one exponent per coordinate
    };

    PolynomialField(int n, std::vector<Term> terms) : ScalarField(n), terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if (static_cast<int>(t.expo.size()) != n)
                throw std::invalid_argument("PolynomialField: exponent arity mismatch");
    }

    double value(const Vec& x) const override { return eval(x, {}); }

    bool has_analytic_derivatives() const override { return true; }

    Vec gradient(const Vec& x) const override {
        Vec g(dim());
        for (int i = 0; i < dim(); ++i) g[i] = eval(x, {i});
        return g;
    }

    Mat hessian(const Vec& x) const override {
        Mat h(dim());
        for (int i = 0; i < dim(); ++i)
            for (int j = i; j < dim(); ++j) h(i, j) = h(j, i) = eval(x, {i, j});
        return h;
    }

    Ten3 third(const Vec& x) const override {
        Ten3 t(dim());
        for (int i = 0; i < dim(); ++i)
            for (int j = i; j < dim(); ++j)
                for (int k = j; k < dim(); ++k) {
                    const double v = eval(x, {i, j, k});
                    t(i, j, k) = t(i, k, j) = t(j, i, k) = v;
                    t(j, k, i) = t(k, i, j) = t(k, j, i) = v;
                }
        return t;
    }

private:
    // Partial derivative along the listed coordinates (with multiplicity).
    double eval(const Vec& x, std::initializer_list<int> partials) const {
        double sum = 0.0;
        std::vector<int> drop(dim(), 0);
        for (const auto& t : terms_) {
            for (auto& d : drop) d = 0;
            for (int p : partials) ++drop[p];
            double term = t.coeff;
            for (int c = 0; c < dim() && term != 0.0; ++c) {
                int e = t.expo[c];
                for (int d = 0; d < drop[c]; ++d) term *= e--;
                if (term == 0.0) break;
                for (int d = 0; d < e; ++d) term *= x[c];
            }
            sum += term;
        }
        return sum;
    }

    std::vector<Term> terms_;
};

//! Seeded random polynomial of total degree <= max_degree with coefficients
//! in [-1, 1]; deterministic for a fixed generator state.
inline PolynomialField random_polynomial(int n, int max_degree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<PolynomialField::Term> terms;
    std::vector<int> expo(n, 0);
    // Enumerate all monomials of total degree <= max_degree.
    while (true) {
        int total = 0;
        for (int e : expo) total += e;
        if (total <= max_degree) terms.push_back({coeff(rng), expo});
        int c = 0;
        while (c < n) {
            if (++expo[c] <= max_degree) break;
            expo[c++] = 0;
        }
        if (c == n) break;
    }
    return PolynomialField(n, std::move(terms));
}

} // namespace afmass::fields
