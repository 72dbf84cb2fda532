#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace afmass::mass {

//! One computed mass value with its provenance: which route produced it,
//! how it splits into boundary and volume contributions, and how much
//! numerical error the route itself estimates.
struct MassBreakdown {
    double total = 0.0;
    double boundary = 0.0;
    double volume = 0.0;
    double error = 0.0;
    std::string method;       // adm-flux | conformal-volume | graph-volume | graph-boundary | asymptotic-fit
    std::string note;         // nonempty marks a warning (divergence, conditioning, ...)
};

//! A single checked inequality lhs >= rhs with a relative tolerance.
struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 1e-3;
    bool satisfied = false;
    bool equality = false;

    static InequalityCheck make(std::string name, double lhs, double rhs, double tol) {
        InequalityCheck c;
        c.name = std::move(name);
        c.lhs = lhs;
        c.rhs = rhs;
        c.tolerance = tol;
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        c.satisfied = lhs >= rhs - tol * scale;
        c.equality = std::abs(lhs - rhs) <= tol * scale;
        return c;
    }
};

//! Verdict sheet for one instance: every number a check uses is stored, so
//! the verdicts can be recomputed from the report alone.
struct InequalityReport {
    std::string instance_id;
    double mass = 0.0;
    double mass_error = 0.0;
    double m_bh = 0.0;
    double m_zas = 0.0;
    std::vector<double> component_areas;
    std::vector<InequalityCheck> checks;
    bool approximate_horizons = false;

    bool all_satisfied() const {
        for (const auto& c : checks)
            if (!c.satisfied) return false;
        return true;
    }
};

} // namespace afmass::mass
