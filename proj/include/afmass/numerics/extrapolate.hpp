#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace afmass::numerics {

//! Richardson-style elimination ladder for limits of the form
//!   v(r) = L + c/r^s + c'/r^{s+1} + ...   as r -> infinity,
//! or equivalently v = L + c h^s + ... as h -> 0 with h = 1/r. Stage j
//! removes the h^{s+j} term; on exact single-term model data stage one is
//! already exact.
struct ExtrapolationLadder {
    double exponent = 1.0; // leading decay s
    int max_order = 3;     // elimination stages
};

struct LimitEstimate {
    double value = 0.0;
    double error = 0.0;
};

//! Limit as h -> 0 of samples (h_k, v_k); the h_k must be positive and
//! strictly decreasing toward 0.
inline LimitEstimate extrapolate_at_zero(std::vector<std::pair<double, double>> samples,
                                         const ExtrapolationLadder& ladder) {
    const std::size_t K = samples.size();
    if (K < 2) throw std::invalid_argument("extrapolate_at_zero: need at least 2 samples");
    for (std::size_t k = 0; k + 1 < K; ++k)
        if (!(samples[k].first > samples[k + 1].first) || samples[k + 1].first <= 0.0)
            throw std::invalid_argument("extrapolate_at_zero: abscissae must decrease toward 0");

    std::vector<double> h(K), t(K);
    for (std::size_t k = 0; k < K; ++k) {
        h[k] = samples[k].first;
        t[k] = samples[k].second;
    }

    const int stages = static_cast<int>(std::min<std::size_t>(ladder.max_order, K - 1));
    // In-place Neville sweeps; after sweep j, t[k] spans samples k..k+j+1 and
    // the right end of the valid range carries the smallest abscissae.
    std::size_t valid = K;
    double best = t[valid - 1];
    double previous = best;
    for (int j = 0; j < stages; ++j) {
        const double e = ladder.exponent + j;
        for (std::size_t k = 0; k + 1 < valid; ++k) {
            const double pa = std::pow(h[k], e);
            const double pb = std::pow(h[k + 1], e);
            t[k] = (pa * t[k + 1] - pb * t[k]) / (pa - pb);
        }
        --valid;
        previous = best;
        best = t[valid - 1];
    }
    LimitEstimate est;
    est.value = best;
    est.error = std::abs(best - previous);
    return est;
}

//! Limit as r -> infinity of samples (r_k, v_k) with strictly increasing r_k.
inline LimitEstimate extrapolate_limit(const std::vector<std::pair<double, double>>& samples,
                                       const ExtrapolationLadder& ladder) {
    if (samples.size() < 2) throw std::invalid_argument("extrapolate_limit: need at least 2 samples");
    std::vector<std::pair<double, double>> at_zero;
    at_zero.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (k > 0 && !(samples[k].first > samples[k - 1].first))
            throw std::invalid_argument("extrapolate_limit: radii must strictly increase");
        if (samples[k].first <= 0.0)
            throw std::invalid_argument("extrapolate_limit: radii must be positive");
        at_zero.emplace_back(1.0 / samples[k].first, samples[k].second);
    }
    return extrapolate_at_zero(std::move(at_zero), ladder);
}

} // namespace afmass::numerics
