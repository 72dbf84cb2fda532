#pragma once

#include <stdexcept>
#include <string>

namespace afmass::numerics {

inline constexpr double pi = 3.14159265358979323846264338327950288;

//! Surface measure of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
//!
//! Evaluated through the half-integer Gamma recurrence so the value is exact
//! to rounding (tgamma would cost a few ulps more). Throws for n < 2.
inline double unit_sphere_measure(int n) {
    if (n < 2)
        throw std::domain_error("unit_sphere_measure: need n >= 2, got " + std::to_string(n));
    // gamma(n/2) via Gamma(1/2) = sqrt(pi), Gamma(1) = 1, Gamma(z+1) = z Gamma(z).
    double g = (n % 2 == 0) ? 1.0 : 1.77245385090551602729816748334114518; // Gamma(1) or Gamma(1/2)
    for (double z = (n % 2 == 0) ? 1.0 : 0.5; z < n / 2.0 - 0.25; z += 1.0) g *= z;
    double pw = 1.0;
    for (int i = 0; i < n / 2; ++i) pw *= pi;
    if (n % 2 == 1) pw *= 1.77245385090551602729816748334114518; // pi^{n/2} for odd n
    return 2.0 * pw / g;
}

} // namespace afmass::numerics
