#pragma once

//! Named verification suites over the instance corpus. Each suite reduces
//! into its own report fragment; fragments are merged in registry order, so
//! suites may run concurrently without reordering output.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "afmass/curvature/christoffel.hpp"
#include "afmass/curvature/scalar.hpp"
#include "afmass/fields/polynomial.hpp"
#include "afmass/io/instance_io.hpp"
#include "afmass/mass/adm.hpp"
#include "afmass/mass/bounds.hpp"
#include "afmass/mass/reports.hpp"
#include "afmass/mass/volume.hpp"
#include "afmass/mass/zas.hpp"
#include "afmass/metrics/schwarzschild.hpp"
#include "afmass/suites/config.hpp"
#include "afmass/suites/report.hpp"

namespace afmass::suites {

//! Every suite name, in report order. "all" runs them all.
inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "adm",  "lam-identity", "conformal-mass", "graph-mass", "penrose-graph", "afi",
        "zas",  "quasilocal",   "geodesic",       "embedding",  "inversion"};
    return names;
}

//! Load every *.json instance in a directory, sorted by filename so reports
//! are deterministic.
inline std::vector<io::InstanceFile> load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw std::invalid_argument("instance directory not found: " + dir);
    std::vector<fs::path> paths;
    for (const auto& ent : fs::directory_iterator(dir))
        if (ent.is_regular_file() && ent.path().extension() == ".json")
            paths.push_back(ent.path());
    std::sort(paths.begin(), paths.end());
    std::vector<io::InstanceFile> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(io::load_instance_file(p.string()));
    return out;
}

namespace detail {

inline const numerics::DiffScheme& analytic() {
    static const numerics::DiffScheme s = numerics::DiffScheme::analytic_scheme();
    return s;
}

inline const numerics::DiffScheme& fd() {
    static const numerics::DiffScheme s = numerics::DiffScheme::fd_scheme();
    return s;
}

//! Relative golden-value verdict.
inline bool golden_pass(double value, double expected, double tol) {
    return std::abs(value - expected) <= tol * std::max(1.0, std::abs(expected));
}

inline ReportEntry entry(std::string suite, std::string instance, std::string check,
                         std::string method) {
    ReportEntry e;
    e.suite = std::move(suite);
    e.instance = std::move(instance);
    e.check = std::move(check);
    e.method = std::move(method);
    return e;
}

inline ReportEntry coverage_failure(const std::string& suite, const std::string& oracles) {
    ReportEntry e = entry(suite, "-", "coverage", "-");
    e.passed = false;
    e.detail = "no instance in the corpus declares an oracle in {" + oracles + "}";
    return e;
}

//! Run one instance's checks; any exception becomes a failing entry instead
//! of aborting the suite.
template <class F>
inline void guarded(VerificationReport& rep, const std::string& suite,
                    const std::string& instance, F&& body) {
    try {
        body();
    } catch (const std::exception& ex) {
        ReportEntry e = entry(suite, instance, "error", "-");
        e.passed = false;
        e.detail = ex.what();
        rep.entries.push_back(std::move(e));
    }
}

//! Canonical order of the independent total-mass estimators. An agreement
//! check between two estimators is emitted by the suite owning the earlier
//! one, so each pair appears exactly once in a full run.
inline const std::vector<std::string>& mass_methods() {
    static const std::vector<std::string> m{"flux", "fit", "conformal-volume", "graph-volume",
                                            "graph-boundary"};
    return m;
}

inline std::string method_suite(const std::string& m) {
    if (m == "flux" || m == "fit") return "adm";
    if (m == "conformal-volume") return "conformal-mass";
    return "graph-mass";
}

inline numerics::VolumeRule volume_rule_for(const io::InstanceFile& file, int default_degree = 8) {
    if (file.quadrature) return file.quadrature->rule(file.instance.n);
    return numerics::VolumeRule(numerics::make_sphere_rule(file.instance.n, default_degree), 0.0,
                                std::numeric_limits<double>::infinity());
}

//! Field samples on coordinate shells, feeding the decay-coefficient fit.
template <class F>
inline std::vector<std::pair<Vec, double>> shell_samples(F&& value, int n,
                                                         const std::vector<double>& radii,
                                                         int degree) {
    const auto rule = numerics::make_sphere_rule(n, degree);
    std::vector<std::pair<Vec, double>> out;
    for (double r : radii)
        for (std::size_t k = 0; k < rule.size(); ++k) {
            Vec x = rule.node(k);
            for (auto& c : x) c *= r;
            out.emplace_back(x, value(x));
        }
    return out;
}

//! Compute one declared total-mass estimator. The full breakdown is returned
//! so agreement checks can use the reported error bounds.
inline mass::MassBreakdown estimate_mass(const std::string& method, const io::InstanceFile& file,
                                         const SuiteConfig& cfg) {
    const auto& inst = file.instance;
    const int n = inst.n;
    if (method == "flux") {
        mass::AdmOptions opt;
        opt.rungs = cfg.rungs;
        opt.sphere_degree = cfg.sphere_degree;
        return mass::adm_mass(inst, opt);
    }
    if (method == "fit") {
        std::vector<double> shells = file.fit_shells;
        if (shells.empty())
            shells = {2.0 * inst.asymptotic_radius, 4.0 * inst.asymptotic_radius,
                      8.0 * inst.asymptotic_radius};
        if (inst.family == metrics::MetricInstance::Family::graph) {
            // The radial metric coefficient of a graph matches the fourth
            // power of a conformal factor, so the fit samples
            // (1 + |grad f|^2)^{(n-2)/4}.
            const auto& f = inst.graph->graph_ptr();
            const double expo = 0.25 * (n - 2.0);
            const auto u_eff = [&](const Vec& x) {
                const Vec df = f->gradient(x);
                return std::pow(1.0 + dot(df, df), expo);
            };
            return mass::asymptotic_fit(shell_samples(u_eff, n, shells, 6), n);
        }
        if (!inst.conformal)
            throw std::invalid_argument("estimator 'fit' needs a conformal factor or a graph: " +
                                        inst.id);
        const auto& u = inst.conformal->factor_field();
        return mass::asymptotic_fit(
            shell_samples([&](const Vec& x) { return u.value(x); }, n, shells, 6), n);
    }
    if (method == "conformal-volume") {
        if (!inst.conformal)
            throw std::invalid_argument("estimator 'conformal-volume' needs a conformal factor: " +
                                        inst.id);
        return mass::mass_conformal(inst.conformal->factor_field(), n, volume_rule_for(file),
                                    analytic());
    }
    if (method == "graph-volume") {
        if (!inst.graph)
            throw std::invalid_argument("estimator 'graph-volume' needs a graph function: " +
                                        inst.id);
        return mass::mass_graph(inst.graph->graph_field(), n, volume_rule_for(file), analytic());
    }
    if (method == "graph-boundary") {
        if (!inst.graph)
            throw std::invalid_argument("estimator 'graph-boundary' needs a graph function: " +
                                        inst.id);
        return mass::mass_graph_boundary(*inst.graph, volume_rule_for(file), analytic());
    }
    throw std::invalid_argument("unknown mass estimator: " + method);
}

//! Pairwise agreement of independent estimators, attributed to the suite
//! owning the pair. The allowance is both reported error bounds plus a small
//! relative slack for truncation bias the bounds cannot see.
inline void agreement_entries(const std::string& suite, const io::InstanceFile& file,
                              const SuiteConfig& cfg, VerificationReport& rep) {
    constexpr double kAgreementSlack = 1e-6;
    std::vector<std::string> declared;
    for (const auto& m : mass_methods())
        if (file.has_oracle(m)) declared.push_back(m);
    if (declared.size() < 2) return;
    std::map<std::string, mass::MassBreakdown> memo;
    const auto get = [&](const std::string& m) -> const mass::MassBreakdown& {
        auto it = memo.find(m);
        if (it == memo.end()) it = memo.emplace(m, estimate_mass(m, file, cfg)).first;
        return it->second;
    };
    for (std::size_t i = 0; i < declared.size(); ++i) {
        if (method_suite(declared[i]) != suite) continue;
        for (std::size_t j = i + 1; j < declared.size(); ++j) {
            const auto& a = get(declared[i]);
            const auto& b = get(declared[j]);
            const double gap = std::abs(a.total - b.total);
            const double scale = std::max({1.0, std::abs(a.total), std::abs(b.total)});
            ReportEntry e = entry(suite, file.instance.id,
                                  "agreement:" + declared[i] + "~" + declared[j],
                                  declared[i] + "|" + declared[j]);
            e.value = gap;
            e.error = a.error + b.error;
            e.expected = 0.0;
            e.tolerance = a.error + b.error + kAgreementSlack * scale;
            e.passed = gap <= e.tolerance;
            e.detail = declared[i] + " = " + fmt_short(a.total) + ", " + declared[j] + " = " +
                       fmt_short(b.total);
            rep.entries.push_back(std::move(e));
        }
    }
}

// ---------------------------------------------------------------------------
// Individual suites. Each takes the shared corpus and appends entries/series.
// ---------------------------------------------------------------------------

//! Total-mass flux ladder: golden values, dimension sweep of the vacuum
//! family, the decay-coefficient fit, and the estimator agreement checks.
inline void run_adm(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                    VerificationReport& rep) {
    const std::string suite = "adm";
    bool any = false;
    for (const auto& file : corpus) {
        const bool has_flux = file.has_oracle("flux");
        const bool has_fit = file.has_oracle("fit");
        if (!has_flux && !has_fit) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            if (has_flux) {
                const double tol = file.tol_for("flux", cfg.tol);
                const auto est = estimate_mass("flux", file, cfg);
                ReportEntry e = entry(suite, inst.id, "total-mass", est.method);
                e.value = est.total;
                e.error = est.error;
                e.expected = inst.closed_form_mass;
                e.tolerance = tol;
                e.detail = est.note;
                e.passed = est.note.empty() &&
                           (!e.expected || golden_pass(e.value, *e.expected, tol));
                rep.entries.push_back(std::move(e));

                // Flux profile along the ladder, for external plotting.
                const auto sphere = numerics::make_sphere_rule(inst.n, cfg.sphere_degree);
                double r = inst.asymptotic_radius;
                for (int k = 0; k < cfg.rungs; ++k, r *= 2.0)
                    rep.series.push_back(
                        {inst.id, "partial-mass", r, mass::adm_flux(inst, r, sphere, analytic())});
            }
            if (has_fit) {
                const double tol = file.tol_for("fit", cfg.tol);
                const auto est = estimate_mass("fit", file, cfg);
                ReportEntry e = entry(suite, inst.id, "decay-coefficient", est.method);
                e.value = est.total;
                e.error = est.error;
                e.expected = inst.closed_form_mass;
                e.tolerance = tol;
                e.detail = est.note;
                e.passed = est.note.empty() &&
                           (!e.expected || golden_pass(e.value, *e.expected, tol));
                rep.entries.push_back(std::move(e));
            }
            // The vacuum family has the same closed-form mass in every
            // dimension; sweep the declared parameter across the configured
            // list.
            if (has_flux && file.family == "schwarzschild" && file.params.contains("m")) {
                const double m = file.params["m"].get<double>();
                const double tol = file.tol_for("flux", cfg.tol);
                for (int n : cfg.dims) {
                    const auto swept = metrics::make_schwarzschild_instance(m, n);
                    mass::AdmOptions opt;
                    opt.rungs = cfg.rungs;
                    opt.sphere_degree = cfg.sphere_degree;
                    const auto est = mass::adm_mass(swept, opt);
                    ReportEntry e =
                        entry(suite, inst.id, "total-mass-n" + std::to_string(n), est.method);
                    e.value = est.total;
                    e.error = est.error;
                    e.expected = m;
                    e.tolerance = tol;
                    e.detail = est.note;
                    e.passed = est.note.empty() && golden_pass(est.total, m, tol);
                    rep.entries.push_back(std::move(e));
                }
            }
            agreement_entries(suite, file, cfg, rep);
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "flux, fit"));
}

//! Divergence identity of the flux integrand on random polynomial graphs.
inline void run_lam_identity(const SuiteConfig& cfg, const std::vector<io::InstanceFile>&,
                             VerificationReport& rep) {
    const std::string suite = "lam-identity";
    guarded(rep, suite, "-", [&] {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> coord(-1.5, 1.5);
        const auto nested = numerics::DiffScheme::nested_fd_scheme();
        // The identity is dimension agnostic; two dimensions and a hundred
        // fields each keep the runtime bounded while exercising every term.
        for (int n : {3, 4}) {
            double worst_an = 0.0;
            double worst_fd = 0.0;
            for (int rep_k = 0; rep_k < 100; ++rep_k) {
                const auto f = fields::random_polynomial(n, 3, rng);
                for (int p = 0; p < 50; ++p) {
                    Vec x(n);
                    for (auto& v : x) v = coord(rng);
                    worst_an = std::max(worst_an, curvature::lam_identity_residual(f, x, analytic()));
                    worst_fd = std::max(worst_fd, curvature::lam_identity_residual(f, x, nested));
                }
            }
            ReportEntry a = entry(suite, "-", "max-analytic-residual-n" + std::to_string(n),
                                  "divergence-identity");
            a.value = worst_an;
            a.expected = 0.0;
            a.tolerance = 1e-8;
            a.passed = worst_an <= 1e-8;
            a.detail = "100 random polynomial fields, 50 points each";
            rep.entries.push_back(std::move(a));

            ReportEntry b =
                entry(suite, "-", "max-fd-residual-n" + std::to_string(n), "divergence-identity");
            b.value = worst_fd;
            b.expected = 0.0;
            b.tolerance = 1e-4;
            b.passed = worst_fd <= 1e-4;
            b.detail = "same fields and points, finite differences";
            rep.entries.push_back(std::move(b));
        }
    });
}

//! Conformally flat volume integrals against closed forms and peers.
inline void run_conformal_mass(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                               VerificationReport& rep) {
    const std::string suite = "conformal-mass";
    bool any = false;
    for (const auto& file : corpus) {
        if (!file.has_oracle("conformal-volume")) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            const double tol = file.tol_for("conformal-volume", cfg.tol);
            const auto est = estimate_mass("conformal-volume", file, cfg);
            ReportEntry e = entry(suite, inst.id, "total-mass", est.method);
            e.value = est.total;
            e.error = est.error;
            e.expected = inst.closed_form_mass;
            e.tolerance = tol;
            e.detail = "boundary = " + fmt_short(est.boundary) +
                       ", volume = " + fmt_short(est.volume);
            e.passed = !e.expected || golden_pass(e.value, *e.expected, tol);
            rep.entries.push_back(std::move(e));
            agreement_entries(suite, file, cfg, rep);
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "conformal-volume"));
}

//! Graph-metric volume integrals and the boundary-plus-volume split.
inline void run_graph_mass(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                           VerificationReport& rep) {
    const std::string suite = "graph-mass";
    bool any = false;
    for (const auto& file : corpus) {
        const bool has_vol = file.has_oracle("graph-volume");
        const bool has_bdy = file.has_oracle("graph-boundary");
        if (!has_vol && !has_bdy) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            for (const std::string method : {"graph-volume", "graph-boundary"}) {
                if (!file.has_oracle(method)) continue;
                const double tol = file.tol_for(method, cfg.tol);
                const auto est = estimate_mass(method, file, cfg);
                ReportEntry e = entry(suite, inst.id, "total-mass", est.method);
                e.value = est.total;
                e.error = est.error;
                e.expected = inst.closed_form_mass;
                e.tolerance = tol;
                e.detail = "boundary = " + fmt_short(est.boundary) +
                           ", volume = " + fmt_short(est.volume);
                e.passed = !e.expected || golden_pass(e.value, *e.expected, tol);
                rep.entries.push_back(std::move(e));
            }
            agreement_entries(suite, file, cfg, rep);
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "graph-volume, graph-boundary"));
}

//! Mass-versus-horizon-area inequality reports on graph instances.
inline void run_penrose_graph(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                              VerificationReport& rep) {
    const std::string suite = "penrose-graph";
    bool any = false;
    for (const auto& file : corpus) {
        if (!file.has_oracle("penrose")) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            if (!inst.graph)
                throw std::invalid_argument("penrose oracle needs a graph instance: " + inst.id);
            const double tol = file.tol_for("penrose", cfg.tol);
            const auto rpt = mass::penrose_report_graph(*inst.graph, inst.id,
                                                        volume_rule_for(file), analytic(), tol);
            for (const auto& chk : rpt.checks) {
                ReportEntry e = entry(suite, inst.id, chk.name, "penrose-graph");
                e.value = chk.lhs;
                e.expected = chk.rhs;
                e.tolerance = tol;
                e.passed = file.expect_equality ? (chk.satisfied && chk.equality) : chk.satisfied;
                e.detail = chk.equality ? "equality within tolerance"
                                        : "margin = " + fmt_short(chk.lhs - chk.rhs);
                rep.entries.push_back(std::move(e));
            }
            ReportEntry e = entry(suite, inst.id, "report-mass", "graph-boundary");
            e.value = rpt.mass;
            e.error = rpt.mass_error;
            e.expected = inst.closed_form_mass;
            e.tolerance = tol;
            e.passed = !e.expected || golden_pass(e.value, *e.expected, tol);
            std::string areas;
            for (double a : rpt.component_areas)
                areas += (areas.empty() ? "" : ", ") + fmt_short(a);
            e.detail = "component areas: " + (areas.empty() ? std::string("none") : areas);
            rep.entries.push_back(std::move(e));
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "penrose"));
}

//! Convex-surface bound: equality on round spheres, strict margin on an
//! eccentric ellipsoid, and validity on a family of convex shapes.
inline void run_afi(const SuiteConfig& cfg, const std::vector<io::InstanceFile>&,
                    VerificationReport& rep) {
    const std::string suite = "afi";
    guarded(rep, suite, "-", [&] {
        for (int n : cfg.dims) {
            const auto rule = numerics::make_sphere_rule(n, std::max(cfg.sphere_degree, 10));
            for (double rho : {0.5, 1.0, 2.0}) {
                const auto s = metrics::SurfaceSpec::sphere_at(Vec(n, 0.0), rho);
                const auto [lhs, rhs] = mass::af_boundary_bound(s, n, rule);
                ReportEntry e = entry(suite, "-",
                                      "round-equality-n" + std::to_string(n) + "-r" +
                                          fmt_short(rho),
                                      "convex-surface-bound");
                e.value = lhs;
                e.expected = rhs;
                e.tolerance = 1e-8;
                e.passed = golden_pass(lhs, rhs, 1e-8);
                e.detail = "closed form = " + fmt_short(0.5 * std::pow(rho, n - 2.0));
                rep.entries.push_back(std::move(e));
            }
        }
        if (std::find(cfg.dims.begin(), cfg.dims.end(), 3) != cfg.dims.end()) {
            const auto rule = numerics::make_sphere_rule(3, std::max(cfg.sphere_degree, 24));
            {
                const auto s = metrics::SurfaceSpec::ellipsoid_at(Vec(3, 0.0), Vec{2.0, 1.0, 1.0});
                const auto [lhs, rhs] = mass::af_boundary_bound(s, 3, rule);
                ReportEntry e = entry(suite, "-", "ellipsoid-2-1-1-strict", "convex-surface-bound");
                e.value = lhs - rhs;
                e.expected = 0.0;
                e.tolerance = 1e-3;
                e.passed = lhs - rhs > 1e-3;
                e.detail = "lhs = " + fmt_short(lhs) + ", rhs = " + fmt_short(rhs) +
                           "; strict margin required";
                rep.entries.push_back(std::move(e));
            }
            for (const Vec& semi : {Vec{1.2, 1.0, 1.0}, Vec{1.5, 1.0, 0.8}, Vec{3.0, 0.5, 0.5}}) {
                const auto s = metrics::SurfaceSpec::ellipsoid_at(Vec(3, 0.0), semi);
                const auto [lhs, rhs] = mass::af_boundary_bound(s, 3, rule);
                ReportEntry e = entry(suite, "-",
                                      "ellipsoid-" + fmt_short(semi[0]) + "-" + fmt_short(semi[1]) +
                                          "-" + fmt_short(semi[2]) + "-bound",
                                      "convex-surface-bound");
                e.value = lhs - rhs;
                e.expected = 0.0;
                e.tolerance = 1e-10;
                e.passed = lhs - rhs >= -1e-10;
                e.detail = "lhs = " + fmt_short(lhs) + ", rhs = " + fmt_short(rhs);
                rep.entries.push_back(std::move(e));
            }
        }
    });
}

//! Singular-mass checks: regular resolutions against closed forms, the
//! shrinking-sphere limit, and the flat background as a zero case.
inline void run_zas(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                    VerificationReport& rep) {
    const std::string suite = "zas";
    bool any = false;
    for (const auto& file : corpus) {
        const bool has_reg = file.has_oracle("zas-regular");
        const bool has_lim = file.has_oracle("zas-limit");
        if (!has_reg && !has_lim) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            const auto rule = numerics::make_sphere_rule(inst.n, cfg.sphere_degree);
            if (has_reg) {
                const double tol = file.tol_for("zas-regular", 1e-6);
                if (inst.resolutions.empty())
                    throw std::invalid_argument("zas-regular oracle needs a resolution: " +
                                                inst.id);
                for (std::size_t k = 0; k < inst.resolutions.size(); ++k) {
                    const double v = mass::zas_regular_mass(inst.resolutions[k], rule, analytic());
                    const std::string name = inst.resolutions.size() > 1
                                                 ? "regular-mass-" + std::to_string(k)
                                                 : "regular-mass";
                    ReportEntry e = entry(suite, inst.id, name, "zas-regular");
                    e.value = v;
                    e.expected = inst.closed_form_mass;
                    e.tolerance = tol;
                    e.passed = !e.expected || golden_pass(v, *e.expected, tol);
                    rep.entries.push_back(std::move(e));
                }
            }
            if (has_lim) {
                const double tol = file.tol_for("zas-limit", 1e-2);
                if (!inst.conformal || !inst.conformal->excluded())
                    throw std::invalid_argument(
                        "zas-limit oracle needs a conformal instance with a singular sphere: " +
                        inst.id);
                const double r_sing = inst.conformal->excluded()->radii[0];
                std::vector<double> gaps = file.limit_gaps;
                if (gaps.empty()) gaps = {0.4, 0.2, 0.1, 0.05, 0.025};
                std::sort(gaps.begin(), gaps.end(), std::greater<>());
                std::vector<double> radii;
                radii.reserve(gaps.size());
                for (double h : gaps) radii.push_back(r_sing + h);
                const auto est = mass::zas_mass_limit(*inst.conformal, radii, rule, analytic());
                ReportEntry e = entry(suite, inst.id, "limit-mass", "zas-limit");
                e.value = est.value;
                e.error = est.error;
                e.expected = inst.closed_form_mass;
                e.tolerance = tol;
                e.passed = !e.expected || golden_pass(est.value, *e.expected, tol);
                rep.entries.push_back(std::move(e));
                for (double r : radii)
                    rep.series.push_back({inst.id, "zas-sequence", r,
                                          mass::zas_sequence_value(*inst.conformal, r, rule,
                                                                   analytic())});
            }
        });
    }
    // Flat background: the sequence value has a closed form and the limit
    // vanishes. Pinned to n = 3 where the closed forms live.
    guarded(rep, suite, "-", [&] {
        const auto rule = numerics::make_sphere_rule(3, cfg.sphere_degree);
        const metrics::ConformalMetric flat(3, std::make_shared<fields::ConstantField>(3, 1.0));
        const double seq = mass::zas_sequence_value(flat, 0.3, rule, analytic());
        ReportEntry a = entry(suite, "-", "flat-sequence-value", "zas-limit");
        a.value = seq;
        a.expected = -0.15;
        a.tolerance = 1e-10;
        a.passed = golden_pass(seq, -0.15, 1e-10);
        a.detail = "shrinking sphere r = 0.3 around a flat point";
        rep.entries.push_back(std::move(a));

        const auto est =
            mass::zas_mass_limit(flat, {0.4, 0.2, 0.1, 0.05, 0.025}, rule, analytic());
        ReportEntry b = entry(suite, "-", "flat-limit", "zas-limit");
        b.value = est.value;
        b.error = est.error;
        b.expected = 0.0;
        b.tolerance = 1e-10;
        b.passed = std::abs(est.value) <= 1e-10;
        b.detail = "flat points carry no singular mass";
        rep.entries.push_back(std::move(b));
    });
    if (!any) rep.entries.push_back(coverage_failure(suite, "zas-regular, zas-limit"));
}

//! Coordinate radius of the round sphere with the given area radius, for the
//! positive-mass vacuum factor. The area radius increases with the
//! coordinate radius outside the horizon, so bisection converges.
inline double coordinate_radius_for(const metrics::SchwarzschildGeometry& geom, double target) {
    double lo = geom.horizon_conformal_radius();
    double hi = std::max(target, 2.0 * lo);
    while (geom.area_radius(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (geom.area_radius(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

//! Quasi-local mass on round spheres of the positive vacuum family: constant
//! in the radius and equal to the black-hole mass at the horizon.
inline void run_quasilocal(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                           VerificationReport& rep) {
    const std::string suite = "quasilocal";
    bool any = false;
    for (const auto& file : corpus) {
        if (!file.has_oracle("quasilocal")) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            if (!inst.closed_form_mass || *inst.closed_form_mass <= 0.0)
                throw std::invalid_argument(
                    "quasilocal oracle needs a positive closed-form mass: " + inst.id);
            const double m = *inst.closed_form_mass;
            const int n = inst.n;
            const double tol = file.tol_for("quasilocal", 1e-6);
            const metrics::SchwarzschildGeometry geom(m, n);
            const auto rule = numerics::make_sphere_rule(n, cfg.sphere_degree);

            const double area_radius_h = geom.area_radius(geom.horizon_conformal_radius());
            const double lo = 1.25 * area_radius_h;
            const double hi = 50.0 * area_radius_h;
            double worst = 0.0;
            for (int k = 0; k < 20; ++k) {
                const double big_r = lo * std::pow(hi / lo, k / 19.0);
                const double r = coordinate_radius_for(geom, big_r);
                const double v = mass::quasilocal_mass(
                    inst, metrics::SurfaceSpec::sphere_at(Vec(n, 0.0), r), rule, analytic());
                worst = std::max(worst, std::abs(v - m));
                rep.series.push_back({inst.id, "quasilocal-mass", big_r, v});
            }
            ReportEntry e = entry(suite, inst.id, "round-sphere-constancy", "quasilocal");
            e.value = worst;
            e.expected = 0.0;
            e.tolerance = tol;
            e.passed = worst <= tol;
            e.detail = "max deviation from the total mass over 20 spheres, area radius in [" +
                       fmt_short(lo) + ", " + fmt_short(hi) + "]";
            rep.entries.push_back(std::move(e));

            const double v_h = mass::quasilocal_mass(
                inst,
                metrics::SurfaceSpec::sphere_at(Vec(n, 0.0), geom.horizon_conformal_radius()),
                rule, analytic());
            const double m_bh = mass::black_hole_mass({geom.horizon_area()}, n);
            ReportEntry h = entry(suite, inst.id, "horizon-value", "quasilocal");
            h.value = v_h;
            h.expected = m_bh;
            h.tolerance = 1e-12;
            h.passed = golden_pass(v_h, m_bh, 1e-12);
            h.detail = "mean curvature vanishes on the horizon";
            rep.entries.push_back(std::move(h));
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "quasilocal"));
}

//! Far-field geodesic acceleration of the spacetime charts, extrapolated to
//! the mass-linear limit.
inline void run_geodesic(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                         VerificationReport& rep) {
    const std::string suite = "geodesic";
    bool any = false;
    for (const auto& file : corpus) {
        if (!file.has_oracle("geodesic")) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            if (!inst.spacetime)
                throw std::invalid_argument("geodesic oracle needs a spacetime chart: " + inst.id);
            const double k = inst.spacetime->k;
            const int n = inst.n;
            const double tol = file.tol_for("geodesic", 1e-2);
            std::vector<std::pair<double, double>> samples;
            for (int j = 0; j < 6; ++j) {
                const double r = 6.0 * std::pow(2.0, j);
                const double scaled =
                    curvature::geodesic_acceleration(k, n, r, fd()) * std::pow(r, n - 1.0);
                samples.emplace_back(r, scaled);
                rep.series.push_back({inst.id, "scaled-acceleration", r, scaled});
            }
            const auto est =
                numerics::extrapolate_limit(samples, {static_cast<double>(n - 2), 2});
            ReportEntry e = entry(suite, inst.id, "far-field-acceleration", "geodesic");
            e.value = est.value;
            e.error = est.error;
            e.expected = 2.0 * k * (n - 2.0);
            e.tolerance = tol;
            e.passed = golden_pass(est.value, *e.expected, tol);
            e.detail = "radial ladder r = 6 * 2^j, j < 6";
            rep.entries.push_back(std::move(e));
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "geodesic"));
}

//! Rotationally symmetric embedding profiles: defining equation residual,
//! induced-metric defect, and the throat or tip closed forms.
inline void run_embedding(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                          VerificationReport& rep) {
    const std::string suite = "embedding";
    bool any = false;
    for (const auto& file : corpus) {
        if (!file.has_oracle("embedding")) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            if (!inst.closed_form_mass || *inst.closed_form_mass == 0.0)
                throw std::invalid_argument(
                    "embedding oracle needs a nonzero closed-form mass: " + inst.id);
            const double m = *inst.closed_form_mass;
            const int n = inst.n;
            const metrics::EmbeddingProfile prof(m, n);

            std::vector<double> ws;
            if (n == 3) {
                if (m > 0.0)
                    ws = {-3.0, 0.0, 1.0, 2.0, 4.0, 5.5, 7.5};
                else
                    for (double d : {0.5, 1.0, 2.0, 3.0}) ws.push_back(4.0 * std::abs(m) + d);
            } else {
                const double cap = (m > 0.0 ? 0.95 * std::min(prof.w_limit(), 8.0) : 1.0);
                for (double d : {0.25, 0.5, 0.75, 1.0}) ws.push_back(d * cap);
            }
            const double res_tol = n == 3 ? 1e-8 : 1e-7;
            const double def_tol = n == 3 ? 1e-8 : 1e-6;
            double worst_res = 0.0;
            double worst_def = 0.0;
            for (double w : ws) {
                worst_res = std::max(worst_res, prof.residual(w));
                worst_def = std::max(worst_def, prof.induced_metric_defect(w));
            }
            ReportEntry r = entry(suite, inst.id, "profile-residual-max", "embedding");
            r.value = worst_res;
            r.expected = 0.0;
            r.tolerance = res_tol;
            r.passed = worst_res <= res_tol;
            r.detail = std::to_string(ws.size()) + " heights along the profile";
            rep.entries.push_back(std::move(r));

            ReportEntry d = entry(suite, inst.id, "isometry-defect-max", "embedding");
            d.value = worst_def;
            d.expected = 0.0;
            d.tolerance = def_tol;
            d.passed = worst_def <= def_tol;
            rep.entries.push_back(std::move(d));

            if (m > 0.0) {
                const double throat = std::pow(2.0 * m, 1.0 / (n - 2.0));
                ReportEntry t = entry(suite, inst.id, "throat-radius", "embedding");
                t.value = prof.value(0.0);
                t.expected = throat;
                t.tolerance = 1e-10;
                t.passed = golden_pass(t.value, throat, 1e-10);
                t.detail = "cylinder radius at the reflection plane";
                rep.entries.push_back(std::move(t));
            } else if (n == 3) {
                ReportEntry t = entry(suite, inst.id, "cone-tip", "embedding");
                t.value = prof.value(4.0 * std::abs(m));
                t.expected = 0.0;
                t.tolerance = 1e-12;
                t.passed = std::abs(t.value) <= 1e-12;
                t.detail = "profile closes at the cone point";
                rep.entries.push_back(std::move(t));
            }

            // Profile points for external plotting.
            const double w0 = (n == 3 && m < 0.0) ? 4.0 * std::abs(m) : (n == 3 ? -3.0 : 0.0);
            const double w1 = n == 3 ? (m < 0.0 ? w0 + 3.0 : 7.5)
                                     : (m > 0.0 ? 0.95 * std::min(prof.w_limit(), 8.0) : 1.0);
            for (int k = 0; k <= 24; ++k) {
                const double w = w0 + (w1 - w0) * k / 24.0;
                rep.series.push_back({inst.id, "embedding-profile", w, prof.value(w)});
            }
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "embedding"));
}

//! Sphere inversion as an isometry of the positive vacuum family, sampled at
//! seeded random points.
inline void run_inversion(const SuiteConfig& cfg, const std::vector<io::InstanceFile>& corpus,
                          VerificationReport& rep) {
    const std::string suite = "inversion";
    bool any = false;
    for (const auto& file : corpus) {
        if (!file.has_oracle("inversion")) continue;
        any = true;
        const auto& inst = file.instance;
        guarded(rep, suite, inst.id, [&] {
            if (!inst.closed_form_mass || *inst.closed_form_mass <= 0.0)
                throw std::invalid_argument(
                    "inversion oracle needs a positive closed-form mass: " + inst.id);
            const double m = *inst.closed_form_mass;
            const int n = inst.n;
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> logr(std::log(0.05), std::log(20.0));
            std::normal_distribution<double> gauss(0.0, 1.0);
            double worst = 0.0;
            for (int rep_k = 0; rep_k < 100; ++rep_k) {
                Vec x(n);
                for (auto& v : x) v = gauss(rng);
                const double scale = std::exp(logr(rng)) / norm(x);
                for (auto& v : x) v *= scale;
                worst = std::max(worst, metrics::inversion_pullback_residual(m, n, x));
            }
            ReportEntry e = entry(suite, inst.id, "pullback-residual-max", "inversion");
            e.value = worst;
            e.expected = 0.0;
            e.tolerance = 1e-9;
            e.passed = worst <= 1e-9;
            e.detail = "100 random points, radii spread over [0.05, 20]";
            rep.entries.push_back(std::move(e));

            const metrics::SchwarzschildGeometry geom(m, n);
            Vec fixed(n, 0.0);
            fixed[0] = geom.horizon_conformal_radius();
            const double at_sphere = metrics::inversion_pullback_residual(m, n, fixed);
            ReportEntry f = entry(suite, inst.id, "fixed-sphere-residual", "inversion");
            f.value = at_sphere;
            f.expected = 0.0;
            f.tolerance = 1e-13;
            f.passed = at_sphere <= 1e-13;
            f.detail = "the inversion sphere is pointwise fixed";
            rep.entries.push_back(std::move(f));
        });
    }
    if (!any) rep.entries.push_back(coverage_failure(suite, "inversion"));
}

inline void run_named(const std::string& name, const SuiteConfig& cfg,
                      const std::vector<io::InstanceFile>& corpus, VerificationReport& rep) {
    if (name == "adm") run_adm(cfg, corpus, rep);
    else if (name == "lam-identity") run_lam_identity(cfg, corpus, rep);
    else if (name == "conformal-mass") run_conformal_mass(cfg, corpus, rep);
    else if (name == "graph-mass") run_graph_mass(cfg, corpus, rep);
    else if (name == "penrose-graph") run_penrose_graph(cfg, corpus, rep);
    else if (name == "afi") run_afi(cfg, corpus, rep);
    else if (name == "zas") run_zas(cfg, corpus, rep);
    else if (name == "quasilocal") run_quasilocal(cfg, corpus, rep);
    else if (name == "geodesic") run_geodesic(cfg, corpus, rep);
    else if (name == "embedding") run_embedding(cfg, corpus, rep);
    else if (name == "inversion") run_inversion(cfg, corpus, rep);
    else {
        std::string valid;
        for (const auto& s : suite_names()) valid += (valid.empty() ? "" : ", ") + s;
        throw std::invalid_argument("unknown suite '" + name + "'; valid suites: " + valid +
                                    ", all");
    }
}

} // namespace detail

//! Run one named suite (or "all") over the corpus in cfg.instance_dir.
//! Throws std::invalid_argument for unknown names and malformed
//! configurations, and propagates instance-file errors.
inline VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    validate_config(cfg);
    VerificationReport rep;
    rep.config = config_echo(cfg);
    const auto corpus = load_corpus(cfg.instance_dir);
    if (name == "all") {
        // Fan the suites out; the merge order below is fixed by the registry,
        // so concurrency cannot reorder the report.
        std::vector<std::future<VerificationReport>> parts;
        parts.reserve(suite_names().size());
        for (const auto& s : suite_names())
            parts.push_back(std::async(std::launch::async, [&cfg, &corpus, s] {
                VerificationReport part;
                detail::run_named(s, cfg, corpus, part);
                return part;
            }));
        for (auto& fut : parts) {
            VerificationReport part = fut.get();
            rep.entries.insert(rep.entries.end(), std::make_move_iterator(part.entries.begin()),
                               std::make_move_iterator(part.entries.end()));
            rep.series.insert(rep.series.end(), std::make_move_iterator(part.series.begin()),
                              std::make_move_iterator(part.series.end()));
        }
        return rep;
    }
    detail::run_named(name, cfg, corpus, rep);
    return rep;
}

} // namespace afmass::suites
