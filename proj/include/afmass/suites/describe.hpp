#pragma once

//! Plain-text summary of an instance file: family, dimension, parameters,
//! and the closed-form data the family carries (neck radius, horizon area,
//! zero-set sphere).

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "afmass/io/instance_io.hpp"
#include "afmass/metrics/schwarzschild.hpp"
#include "afmass/numerics/quadrature.hpp"
#include "afmass/suites/report.hpp"

namespace afmass::suites {

namespace detail {

inline std::string join_oracles(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& s : names) out += (out.empty() ? "" : ", ") + s;
    return out;
}

//! Areas in three dimensions are rational multiples of pi; show them that way.
inline std::string fmt_area(double area, int n) {
    if (n == 3) return fmt_short(area / numerics::pi) + " pi";
    return fmt_short(area);
}

} // namespace detail

inline std::string describe_instance(const std::string& path) {
    const io::InstanceFile file = io::load_instance_file(path);
    const metrics::MetricInstance& inst = file.instance;
    std::ostringstream out;

    out << "instance: " << inst.id << "\n";
    out << "family: " << file.family << "\n";
    out << "dimension: " << inst.n << "\n";
    if (!file.params.empty()) out << "params: " << file.params.dump() << "\n";
    out << "decay rate: " << detail::fmt_short(inst.decay) << "\n";
    out << "asymptotic radius: " << detail::fmt_short(inst.asymptotic_radius) << "\n";
    if (inst.closed_form_mass)
        out << "closed-form mass: " << detail::fmt_short(*inst.closed_form_mass) << "\n";

    if (file.family == "flat") {
        out << "mass-relevant fields: all zero\n";
    } else if (file.family == "schwarzschild" && file.params.contains("m")) {
        const double m = file.params["m"].get<double>();
        const metrics::SchwarzschildGeometry geo(m, inst.n);
        if (geo.has_horizon()) {
            out << "horizon: r0 = " << detail::fmt_short(geo.horizon_conformal_radius())
                << ", A = " << detail::fmt_area(geo.horizon_area(), inst.n) << "\n";
        } else if (m < 0.0) {
            out << "ZAS sphere: r = " << detail::fmt_short(geo.inner_radius()) << "\n";
        }
    } else if (file.family == "schwarzschild_graph" && file.params.contains("m")) {
        const double m = file.params["m"].get<double>();
        const double rh = std::pow(2.0 * m, 1.0 / (inst.n - 2.0));
        const double area = numerics::unit_sphere_measure(inst.n) * std::pow(rh, inst.n - 1.0);
        out << "horizon: r = " << detail::fmt_short(rh) << ", A = "
            << detail::fmt_area(area, inst.n) << "\n";
    } else if (inst.family == metrics::MetricInstance::Family::conformal) {
        // The factor's zero spheres, whether declared as the excluded region
        // or through a resolving sequence.
        std::set<std::string> seen;
        auto emit = [&](const metrics::SurfaceSpec& s) {
            if (s.shape != metrics::SurfaceSpec::Shape::sphere) return;
            const std::string r = detail::fmt_short(s.radii[0]);
            if (seen.insert(r).second) out << "ZAS sphere: r = " << r << "\n";
        };
        if (inst.conformal && inst.conformal->excluded()) emit(*inst.conformal->excluded());
        for (const auto& res : inst.resolutions) emit(res.sigma());
    } else if (inst.family == metrics::MetricInstance::Family::spacetime && inst.spacetime) {
        out << "growth rate: k = " << detail::fmt_short(inst.spacetime->k) << "\n";
    }

    if (!file.oracles.empty()) out << "oracles: " << detail::join_oracles(file.oracles) << "\n";
    return out.str();
}

} // namespace afmass::suites
