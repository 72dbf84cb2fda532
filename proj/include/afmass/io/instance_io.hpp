#pragma once

//! JSON instance files: loading, schema validation with field paths, and the
//! text summary used by the command-line front end. The schema is documented
//! in docs/formats.md and versioned by the "schema" field.

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "afmass/fields/builtin.hpp"
#include "afmass/fields/expression.hpp"
#include "afmass/metrics/instance.hpp"
#include "afmass/metrics/schwarzschild.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/volume_rule.hpp"

namespace afmass::io {

using json = nlohmann::ordered_json;

//! Radial quadrature settings an instance file pins for its volume oracles.
struct QuadratureSpec {
    int degree = 8;
    double rmin = 0.0;
    double rmax = std::numeric_limits<double>::infinity();
    std::vector<double> breakpoints;
    bool sqrt_singular_start = false;

    numerics::VolumeRule rule(int n) const {
        numerics::VolumeRule r(numerics::make_sphere_rule(n, degree), rmin, rmax);
        r.breakpoints = breakpoints;
        r.sqrt_singular_start = sqrt_singular_start;
        return r;
    }
};

//! A loaded instance plus the suite-facing declarations that accompany it:
//! which oracles apply, their quadrature, and per-instance tolerances.
struct InstanceFile {
    metrics::MetricInstance instance;
    std::vector<std::string> oracles;
    std::optional<double> tol;
    std::map<std::string, double> tol_by; // per-oracle overrides; win over tol
    bool expect_equality = false;
    std::optional<QuadratureSpec> quadrature;
    std::vector<double> fit_shells;
    std::vector<double> limit_gaps;
    std::string family; // schema family string, finer grained than the instance tag
    json params;        // raw parameter object, echoed for dimension sweeps
    std::string path;

    bool has_oracle(const std::string& name) const {
        for (const auto& o : oracles)
            if (o == name) return true;
        return false;
    }

    //! Tolerance for one oracle's checks: per-oracle override, then the
    //! file-wide value, then the caller's fallback.
    double tol_for(const std::string& oracle, double fallback) const {
        if (const auto it = tol_by.find(oracle); it != tol_by.end()) return it->second;
        return tol.value_or(fallback);
    }
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
    throw std::invalid_argument("instance schema: field '" + path + "' " + what);
}

inline const json& require(const json& obj, const std::string& key, const std::string& parent) {
    const auto it = obj.find(key);
    if (it == obj.end())
        schema_error(parent.empty() ? key : parent + "." + key, "is missing");
    return *it;
}

inline double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "must be a number");
    return v.get<double>();
}

inline int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) schema_error(path, "must be an integer");
    return v.get<int>();
}

inline std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_error(path, "must be a string");
    return v.get<std::string>();
}

inline Vec as_vec(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) schema_error(path, "must be a non-empty array of numbers");
    Vec out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        out[k] = as_number(v[k], path + "[" + std::to_string(k) + "]");
    return out;
}

inline std::vector<double> as_numbers(const json& v, const std::string& path) {
    const Vec u = as_vec(v, path);
    return std::vector<double>(u.begin(), u.end());
}

inline metrics::SurfaceSpec as_surface(const json& v, int n, const std::string& path) {
    if (!v.is_object()) schema_error(path, "must be an object {shape, center, radii}");
    const std::string shape = as_string(require(v, "shape", path), path + ".shape");
    const Vec center = as_vec(require(v, "center", path), path + ".center");
    if (static_cast<int>(center.size()) != n)
        schema_error(path + ".center", "must have length n = " + std::to_string(n));
    const Vec radii = as_vec(require(v, "radii", path), path + ".radii");
    if (shape == "sphere") {
        if (radii.size() != 1) schema_error(path + ".radii", "must have length 1 for a sphere");
        return metrics::SurfaceSpec::sphere_at(center, radii[0]);
    }
    if (shape == "ellipsoid") {
        if (static_cast<int>(radii.size()) != n)
            schema_error(path + ".radii", "must have length n = " + std::to_string(n));
        return metrics::SurfaceSpec::ellipsoid_at(center, radii);
    }
    schema_error(path + ".shape", "must be 'sphere' or 'ellipsoid'");
}

inline std::string field_expr(const json& root, const std::string& name) {
    const auto& fields = require(root, "fields", "");
    if (!fields.is_object()) schema_error("fields", "must be an object of expression strings");
    return as_string(require(fields, name, "fields"), "fields." + name);
}

} // namespace detail

//! Parse an instance JSON document into an InstanceFile. Throws
//! std::invalid_argument with the offending field path on schema violations.
inline InstanceFile parse_instance(const json& root, const std::string& source_name = "") {
    using namespace detail;
    if (!root.is_object()) schema_error("(root)", "must be a JSON object");
    const std::string family = as_string(require(root, "family", ""), "family");
    const int n = as_int(require(root, "n", ""), "n");
    const json params = root.value("params", json::object());
    const auto param_number = [&](const std::string& key) {
        return as_number(require(params, key, "params"), "params." + key);
    };

    metrics::MetricInstance inst;
    if (family == "flat") {
        inst = metrics::make_flat_instance(n);
    } else if (family == "schwarzschild") {
        inst = metrics::make_schwarzschild_instance(param_number("m"), n);
    } else if (family == "multi_center") {
        const auto masses = as_numbers(require(params, "masses", "params"), "params.masses");
        const auto& cs = require(params, "centers", "params");
        if (!cs.is_array() || cs.size() != masses.size())
            schema_error("params.centers", "must be an array matching params.masses");
        std::vector<Vec> centers;
        for (std::size_t k = 0; k < cs.size(); ++k)
            centers.push_back(as_vec(cs[k], "params.centers[" + std::to_string(k) + "]"));
        double total = 0.0;
        for (double m : masses) total += m;
        inst = metrics::make_conformal_instance("multi-center", n,
                                                fields::multi_center_factor(n, masses, centers),
                                                n - 2.0);
        inst.closed_form_mass = total; // flux additivity over separated centers
    } else if (family == "capped_schwarzschild") {
        const double m = param_number("m");
        inst = metrics::make_conformal_instance("capped-schwarzschild", n,
                                                fields::capped_schwarzschild_factor(m, n),
                                                n - 2.0);
        inst.closed_form_mass = m;
    } else if (family == "conformal") {
        const std::string expr = field_expr(root, "u");
        std::optional<metrics::SurfaceSpec> excluded;
        if (const auto it = root.find("excluded_regions"); it != root.end()) {
            if (!it->is_array() || it->size() > 1)
                schema_error("excluded_regions",
                             "must be an array with at most one region for a conformal family");
            if (it->size() == 1) excluded = as_surface((*it)[0], n, "excluded_regions[0]");
        }
        inst = metrics::make_conformal_instance("conformal", n, fields::parse_field(expr, n),
                                                1.0, excluded);
    } else if (family == "graph") {
        const std::string expr = field_expr(root, "f");
        std::vector<metrics::SurfaceSpec> excluded;
        if (const auto it = root.find("excluded_regions"); it != root.end()) {
            if (!it->is_array()) schema_error("excluded_regions", "must be an array");
            for (std::size_t k = 0; k < it->size(); ++k)
                excluded.push_back(
                    as_surface((*it)[k], n, "excluded_regions[" + std::to_string(k) + "]"));
        }
        inst = metrics::make_graph_instance("graph", n, fields::parse_field(expr, n),
                                            std::move(excluded), 1.0);
    } else if (family == "schwarzschild_graph") {
        const double m = param_number("m");
        inst = metrics::make_graph_instance(
            "schwarzschild-graph", n, fields::schwarzschild_graph_profile(m, n),
            {metrics::SurfaceSpec::sphere_at(Vec(n, 0.0), 2.0 * m)}, 1.0);
        inst.closed_form_mass = m;
    } else if (family == "glued_throats") {
        const double m1 = param_number("m1");
        const double m2 = param_number("m2");
        const Vec c1 = as_vec(require(params, "c1", "params"), "params.c1");
        const Vec c2 = as_vec(require(params, "c2", "params"), "params.c2");
        const double bi = param_number("blend_in");
        const double bo = param_number("blend_out");
        inst = metrics::make_graph_instance(
            "glued-throats", n, fields::glued_graph_throats(m1, c1, m2, c2, bi, bo),
            {metrics::SurfaceSpec::sphere_at(c1, 2.0 * m1),
             metrics::SurfaceSpec::sphere_at(c2, 2.0 * m2)},
            1.0);
        // Exact far-field superposition: the cross term contributes 2 sqrt(m1 m2).
        inst.closed_form_mass = m1 + m2 + 2.0 * std::sqrt(m1 * m2);
    } else if (family == "spacetime") {
        inst = metrics::make_spacetime_instance(param_number("k"), n);
    } else {
        schema_error("family", "must be one of flat, schwarzschild, multi_center, "
                               "capped_schwarzschild, conformal, graph, schwarzschild_graph, "
                               "glued_throats, spacetime; got '" + family + "'");
    }

    if (const auto it = root.find("resolutions"); it != root.end()) {
        if (!it->is_array()) schema_error("resolutions", "must be an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const std::string p = "resolutions[" + std::to_string(k) + "]";
            const json& r = (*it)[k];
            if (!r.is_object()) schema_error(p, "must be an object {phibar, surface[, psi]}");
            const auto phibar =
                fields::parse_field(as_string(require(r, "phibar", p), p + ".phibar"), n);
            const auto sigma = as_surface(require(r, "surface", p), n, p + ".surface");
            fields::FieldPtr psi;
            if (const auto pit = r.find("psi"); pit != r.end())
                psi = fields::parse_field(as_string(*pit, p + ".psi"), n);
            inst.resolutions.emplace_back(n, phibar, sigma, psi);
        }
    }

    if (const auto it = root.find("id"); it != root.end())
        inst.id = as_string(*it, "id");
    else if (!source_name.empty())
        inst.id = source_name;
    if (const auto it = root.find("decay"); it != root.end())
        inst.decay = as_number(*it, "decay");
    if (const auto it = root.find("asymptotic_radius"); it != root.end())
        inst.asymptotic_radius = as_number(*it, "asymptotic_radius");
    if (const auto it = root.find("closed_form_mass"); it != root.end())
        inst.closed_form_mass = as_number(*it, "closed_form_mass");

    InstanceFile out;
    out.instance = std::move(inst);
    if (const auto it = root.find("oracles"); it != root.end()) {
        if (!it->is_array()) schema_error("oracles", "must be an array of strings");
        for (std::size_t k = 0; k < it->size(); ++k)
            out.oracles.push_back(as_string((*it)[k], "oracles[" + std::to_string(k) + "]"));
    }
    if (const auto it = root.find("tol"); it != root.end()) {
        if (it->is_object()) {
            for (const auto& [key, val] : it->items())
                out.tol_by[key] = as_number(val, "tol." + key);
        } else {
            out.tol = as_number(*it, "tol");
        }
    }
    if (const auto it = root.find("expect_equality"); it != root.end()) {
        if (!it->is_boolean()) schema_error("expect_equality", "must be a boolean");
        out.expect_equality = it->get<bool>();
    }
    if (const auto it = root.find("fit_shells"); it != root.end())
        out.fit_shells = as_numbers(*it, "fit_shells");
    if (const auto it = root.find("limit_gaps"); it != root.end())
        out.limit_gaps = as_numbers(*it, "limit_gaps");
    if (const auto it = root.find("quadrature"); it != root.end()) {
        const json& q = *it;
        if (!q.is_object()) schema_error("quadrature", "must be an object");
        QuadratureSpec spec;
        if (const auto d = q.find("degree"); d != q.end())
            spec.degree = as_int(*d, "quadrature.degree");
        if (const auto d = q.find("rmin"); d != q.end())
            spec.rmin = as_number(*d, "quadrature.rmin");
        if (const auto d = q.find("rmax"); d != q.end()) {
            if (d->is_string() && d->get<std::string>() == "inf")
                spec.rmax = std::numeric_limits<double>::infinity();
            else
                spec.rmax = as_number(*d, "quadrature.rmax");
        }
        if (const auto d = q.find("breakpoints"); d != q.end())
            spec.breakpoints = as_numbers(*d, "quadrature.breakpoints");
        if (const auto d = q.find("sqrt_singular_start"); d != q.end()) {
            if (!d->is_boolean()) schema_error("quadrature.sqrt_singular_start", "must be a boolean");
            spec.sqrt_singular_start = d->get<bool>();
        }
        out.quadrature = spec;
    }
    out.family = family;
    out.params = params;
    return out;
}

//! Load an instance file from disk. JSON syntax errors propagate as
//! nlohmann parse_error (with byte position); schema violations as
//! std::invalid_argument naming the field path.
inline InstanceFile load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    json root = json::parse(in); // throws with position on malformed input
    std::string stem = path;
    if (const auto slash = stem.find_last_of('/'); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (const auto dot = stem.rfind(".json"); dot != std::string::npos) stem = stem.substr(0, dot);
    InstanceFile out = parse_instance(root, stem);
    out.path = path;
    return out;
}

inline metrics::MetricInstance load_instance(const std::string& path) {
    return load_instance_file(path).instance;
}

namespace detail {

//! Smallest positive zero of u along the first coordinate ray, if any,
//! located by sign scan plus bisection. Identifies vanishing-factor spheres.
inline std::optional<double> radial_factor_zero(const fields::ScalarField& u, int n,
                                                double r_max) {
    const int samples = 2048;
    const double r_lo = 1e-4 * r_max;
    auto value_at = [&](double r) {
        Vec x(n, 0.0);
        x[0] = r;
        return u.value(x);
    };
    double prev_r = r_lo, prev_v = value_at(r_lo);
    for (int k = 1; k <= samples; ++k) {
        const double r = r_lo * std::pow(r_max / r_lo, static_cast<double>(k) / samples);
        const double v = value_at(r);
        if ((prev_v <= 0.0 && v > 0.0) || (prev_v > 0.0 && v <= 0.0)) {
            double a = prev_r, b = r, va = prev_v;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                const double vm = value_at(mid);
                if ((va <= 0.0) == (vm <= 0.0)) {
                    a = mid;
                    va = vm;
                } else {
                    b = mid;
                }
            }
            return 0.5 * (a + b);
        }
        prev_r = r;
        prev_v = v;
    }
    return std::nullopt;
}

inline std::string family_name(metrics::MetricInstance::Family f) {
    switch (f) {
        case metrics::MetricInstance::Family::flat: return "flat";
        case metrics::MetricInstance::Family::conformal: return "conformal";
        case metrics::MetricInstance::Family::graph: return "graph";
        case metrics::MetricInstance::Family::spacetime: return "spacetime";
    }
    return "unknown";
}

inline std::string round_multiple_of_pi(double v) {
    const double k = v / numerics::pi;
    const double kr = std::round(k);
    if (kr != 0.0 && std::abs(k - kr) < 1e-12) {
        std::ostringstream os;
        os << " (= " << kr << " pi)";
        return os.str();
    }
    return "";
}

} // namespace detail

//! Human-readable summary of a loaded instance: family, parameters, and the
//! derived closed-form data (horizon radius and area, vanishing-factor
//! spheres, singular resolutions).
inline std::string describe_instance(const InstanceFile& file) {
    const auto& inst = file.instance;
    std::ostringstream os;
    os.precision(12);
    os << "id: " << inst.id << "\n";
    os << "family: " << detail::family_name(inst.family) << ", n = " << inst.n << "\n";
    os << "decay exponent: " << inst.decay
       << ", asymptotic radius: " << inst.asymptotic_radius << "\n";
    if (inst.closed_form_mass)
        os << "closed-form mass: " << *inst.closed_form_mass << "\n";
    else
        os << "closed-form mass: none declared\n";

    if (inst.conformal) {
        const auto& cm = *inst.conformal;
        if (cm.excluded()) {
            const auto& s = *cm.excluded();
            os << "excluded region: sphere of radius " << s.radii[0] << "\n";
        }
        // A horizon sphere exists exactly when the factor fits the positive
        // vacuum family; report it through the closed-form geometry.
        if (inst.closed_form_mass && *inst.closed_form_mass > 0.0 &&
            inst.family == metrics::MetricInstance::Family::conformal &&
            inst.id.rfind("schwarzschild", 0) == 0) {
            const metrics::SchwarzschildGeometry geo(*inst.closed_form_mass, inst.n);
            const double area = geo.horizon_area();
            os << "horizon: r0 = " << geo.horizon_conformal_radius() << ", area = " << area
               << detail::round_multiple_of_pi(area)
               << ", area radius = " << geo.area_radius(geo.horizon_conformal_radius()) << "\n";
        }
        const auto zero = detail::radial_factor_zero(cm.factor_field(), inst.n,
                                                     inst.asymptotic_radius);
        if (zero)
            os << "conformal factor vanishes on the coordinate sphere r = " << *zero
               << " (resolved singular boundary candidate)\n";
        if (inst.family == metrics::MetricInstance::Family::flat)
            os << "all mass-relevant quantities vanish\n";
    }
    if (inst.graph) {
        os << "graph boundary components: " << inst.graph->excluded().size() << "\n";
        for (const auto& s : inst.graph->excluded())
            os << "  component: sphere of radius " << s.radii[0] << "\n";
    }
    if (inst.spacetime) {
        const double k = inst.spacetime->k;
        os << "static potential parameter k = " << k << "\n";
        if (k > 0.0)
            os << "horizon area radius = " << std::pow(2.0 * k, 1.0 / (inst.n - 2.0)) << "\n";
        os << "far-field acceleration limit a r^(n-1) = " << 2.0 * k * (inst.n - 2.0) << "\n";
    }
    if (!inst.resolutions.empty())
        os << "singular resolutions attached: " << inst.resolutions.size() << "\n";
    if (!file.oracles.empty()) {
        os << "oracles:";
        for (const auto& o : file.oracles) os << " " << o;
        os << "\n";
    }
    return os.str();
}

} // namespace afmass::io
