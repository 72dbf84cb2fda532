#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "afmass/fields/builtin.hpp"
#include "afmass/metrics/conformal.hpp"
#include "afmass/metrics/graph.hpp"
#include "afmass/metrics/schwarzschild.hpp"
#include "afmass/metrics/spacetime.hpp"
#include "afmass/metrics/zas.hpp"

namespace afmass::metrics {

//! A tagged metric family instance: the unit of work for mass functionals
//! and inequality reports. Exactly one of the family payloads is populated.
struct MetricInstance {
    enum class Family { flat, conformal, graph, spacetime };

    Family family = Family::flat;
    std::string id = "flat";
    int n = 3;

    std::optional<ConformalMetric> conformal;
    std::optional<GraphMetric> graph;
    std::optional<SpacetimeInstance> spacetime;
    std::vector<ZASResolution> resolutions; // declared singular surfaces, possibly empty

    //! Declared decay exponent of the flux-integrand corrections; drives the
    //! extrapolation ladder of the total-mass limit.
    double decay = 1.0;
    //! First rung of the flux ladder; must clear every excluded region, seam,
    //! and blending annulus of the instance.
    double asymptotic_radius = 4.0;
    //! Closed-form mass when the family carries one (vacuum instances).
    std::optional<double> closed_form_mass;
};

inline MetricInstance make_flat_instance(int n) {
    MetricInstance inst;
    inst.family = MetricInstance::Family::flat;
    inst.id = "flat";
    inst.n = n;
    inst.conformal.emplace(n, std::make_shared<fields::ConstantField>(n, 1.0));
    inst.decay = n - 2.0;
    inst.closed_form_mass = 0.0;
    return inst;
}

inline MetricInstance make_schwarzschild_instance(double m, int n) {
    MetricInstance inst;
    inst.family = MetricInstance::Family::conformal;
    inst.id = "schwarzschild";
    inst.n = n;
    auto u = fields::schwarzschild_conformal_factor(m, n);
    std::optional<SurfaceSpec> excluded;
    if (m < 0.0) {
        SchwarzschildGeometry geo(m, n);
        excluded = SurfaceSpec::sphere_at(Vec(n, 0.0), geo.inner_radius());
    }
    inst.conformal.emplace(n, u, excluded);
    if (excluded) inst.resolutions.emplace_back(n, u, *excluded);
    inst.decay = n - 2.0;
    inst.asymptotic_radius = std::max(4.0, 8.0 * std::pow(std::abs(m) / 2.0 + 0.25, 1.0 / (n - 2.0)));
    inst.closed_form_mass = m;
    return inst;
}

inline MetricInstance make_conformal_instance(std::string id, int n, fields::FieldPtr u,
                                              double decay,
                                              std::optional<SurfaceSpec> excluded = {}) {
    MetricInstance inst;
    inst.family = MetricInstance::Family::conformal;
    inst.id = std::move(id);
    inst.n = n;
    inst.conformal.emplace(n, std::move(u), std::move(excluded));
    inst.decay = decay;
    return inst;
}

inline MetricInstance make_graph_instance(std::string id, int n, fields::FieldPtr f,
                                          std::vector<SurfaceSpec> excluded, double decay) {
    MetricInstance inst;
    inst.family = MetricInstance::Family::graph;
    inst.id = std::move(id);
    inst.n = n;
    inst.graph.emplace(n, std::move(f), std::move(excluded));
    inst.decay = decay;
    return inst;
}

inline MetricInstance make_spacetime_instance(double k, int n) {
    MetricInstance inst;
    inst.family = MetricInstance::Family::spacetime;
    inst.id = "spacetime";
    inst.n = n;
    inst.spacetime.emplace(k, n);
    inst.decay = n - 2.0;
    return inst;
}

} // namespace afmass::metrics
