#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "afmass/fields/builtin.hpp"
#include "afmass/fields/expression.hpp"
#include "afmass/metrics/conformal.hpp"
#include "afmass/metrics/graph.hpp"
#include "afmass/metrics/schwarzschild.hpp"
#include "afmass/metrics/spacetime.hpp"
#include "afmass/metrics/surfaces.hpp"
#include "afmass/metrics/zas.hpp"
#include "afmass/numerics/constants.hpp"

using namespace afmass;
using namespace afmass::metrics;
using afmass::numerics::DiffScheme;
using afmass::numerics::pi;
using afmass::numerics::unit_sphere_measure;

TEST_CASE("surface areas from the unit-sphere pullback") {
    SECTION("round spheres in several dimensions") {
        auto r3 = numerics::make_sphere_rule(3, 20);
        CHECK(surface_area(SurfaceSpec::sphere_at(Vec(3, 0.0), 2.0), r3) ==
              Catch::Approx(16.0 * pi).epsilon(1e-12));
        auto r4 = numerics::make_sphere_rule(4, 20);
        CHECK(surface_area(SurfaceSpec::sphere_at({1.0, 0.0, -1.0, 2.0}, 1.0), r4) ==
              Catch::Approx(2.0 * pi * pi).epsilon(1e-12));
    }
    SECTION("prolate spheroid against the closed form") {
        // Semiaxes (2,1,1): S = 2 pi b^2 (1 + (a/(b e)) asin e), e = sqrt(1 - b^2/a^2).
        auto rule = numerics::make_sphere_rule(3, 20);
        const double a = 2.0, b = 1.0;
        const double e = std::sqrt(1.0 - b * b / (a * a));
        const double want = 2.0 * pi * b * b * (1.0 + a / (b * e) * std::asin(e));
        const auto s = SurfaceSpec::ellipsoid_at(Vec(3, 0.0), {2.0, 1.0, 1.0});
        CHECK(surface_area(s, rule) == Catch::Approx(want).epsilon(1e-10));
    }
    SECTION("containment, level, and distance") {
        const auto s = SurfaceSpec::ellipsoid_at(Vec(3, 0.0), {2.0, 1.0, 1.0});
        CHECK(s.contains({1.9, 0.0, 0.0}));
        CHECK(!s.contains({0.0, 1.1, 0.0}));
        CHECK(s.level({2.0, 0.0, 0.0}) == Catch::Approx(1.0));
        const auto sphere = SurfaceSpec::sphere_at(Vec(3, 0.0), 2.0);
        CHECK(sphere.boundary_distance({3.0, 0.0, 0.0}) == Catch::Approx(1.0));
        CHECK(sphere.boundary_distance({0.0, 0.5, 0.0}) == Catch::Approx(1.5));
        CHECK(sphere.is_round());
        CHECK(!s.is_round());
    }
    SECTION("normals and flux of the position field") {
        // div x = n, so the outward flux through any of these surfaces is
        // n * enclosed volume; ellipsoid volume = (omega/n) prod a_i.
        auto rule = numerics::make_sphere_rule(3, 20);
        const auto s = SurfaceSpec::ellipsoid_at({0.5, 0.0, 0.0}, {2.0, 1.0, 0.5});
        const double flux = integrate_surface_with_normal(
            s, rule, [&](const Vec& x, const Vec& nu) {
                return (x[0] - 0.5) * nu[0] + x[1] * nu[1] + x[2] * nu[2];
            });
        const double volume = unit_sphere_measure(3) / 3.0 * (2.0 * 1.0 * 0.5);
        CHECK(flux == Catch::Approx(3.0 * volume).epsilon(1e-12));
    }
    SECTION("constructor guards") {
        CHECK_THROWS_AS(SurfaceSpec::sphere_at(Vec(3, 0.0), 0.0), std::invalid_argument);
        CHECK_THROWS_AS(SurfaceSpec::ellipsoid_at(Vec(3, 0.0), {1.0, -1.0, 1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(SurfaceSpec::ellipsoid_at(Vec(3, 0.0), {1.0, 1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("conformally flat metric accessors") {
    auto u = fields::schwarzschild_conformal_factor(1.0, 3);
    ConformalMetric g(3, u);
    const Vec x{2.0, 0.0, 0.0}; // u = 1.25
    SECTION("components and element ratios") {
        const Mat c = g.components(x);
        CHECK(c(0, 0) == Catch::Approx(std::pow(1.25, 4.0)).epsilon(1e-15));
        CHECK(c(0, 1) == 0.0);
        CHECK(g.volume_element(x) == Catch::Approx(std::pow(1.25, 6.0)).epsilon(1e-15));
        CHECK(g.area_element(x) ==
              Catch::Approx(g.volume_element(x) / g.length_element(x)).epsilon(1e-15));
    }
    SECTION("horizon sphere area matches the closed form") {
        auto rule = numerics::make_sphere_rule(3, 20);
        SchwarzschildGeometry geo(1.0, 3);
        CHECK(g.sphere_area(geo.horizon_conformal_radius(), rule) ==
              Catch::Approx(geo.horizon_area()).epsilon(1e-12));
    }
    SECTION("positivity contract") {
        auto v = fields::schwarzschild_conformal_factor(-1.0, 3);
        ConformalMetric gneg(3, v, SurfaceSpec::sphere_at(Vec(3, 0.0), 0.5));
        CHECK_THROWS_AS(gneg.factor({0.5, 0.0, 0.0}), std::domain_error); // u = 0 on the sphere
        CHECK(gneg.factor({1.0, 0.0, 0.0}) == Catch::Approx(0.5));
        CHECK(!gneg.in_domain({0.1, 0.0, 0.0}));
    }
}

TEST_CASE("graph metric components and hypotheses") {
    SECTION("determinant lemma holds exactly") {
        auto f = fields::parse_field("(1 + r^2)^0.25", 3);
        GraphMetric g(3, f);
        const Vec x{0.8, -0.3, 1.1};
        const auto scheme = DiffScheme::analytic_scheme();
        const Mat c = g.components(x, scheme);
        const Vec grad = f->gradient(x);
        // Direct 3x3 determinant of delta + grad grad^T.
        const double det = c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) -
                           c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0)) +
                           c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0));
        CHECK(det == Catch::Approx(1.0 + dot(grad, grad)).epsilon(1e-13));
        CHECK(g.volume_element(x, scheme) == Catch::Approx(std::sqrt(det)).epsilon(1e-13));
    }
    SECTION("boundary hypotheses accept the throat profile") {
        auto f = fields::schwarzschild_graph_profile(1.0, 3);
        GraphMetric g(3, f, {SurfaceSpec::sphere_at(Vec(3, 0.0), 2.0)});
        auto rule = numerics::make_sphere_rule(3, 8);
        CHECK_NOTHROW(g.check_boundary_hypotheses(rule));
        CHECK(!g.in_domain({0.5, 0.0, 0.0}));
        CHECK(g.in_domain({3.0, 0.0, 0.0}));
    }
    SECTION("boundary hypotheses reject a non-vanishing graph") {
        auto f = fields::parse_field("1 + x1^2 + x2^2 + x3^2", 3);
        GraphMetric g(3, f, {SurfaceSpec::sphere_at(Vec(3, 0.0), 1.0)});
        auto rule = numerics::make_sphere_rule(3, 8);
        CHECK_THROWS_AS(g.check_boundary_hypotheses(rule), std::invalid_argument);
    }
    SECTION("boundary hypotheses reject a bounded gradient") {
        auto f = fields::parse_field("r - 1", 3);
        GraphMetric g(3, f, {SurfaceSpec::sphere_at(Vec(3, 0.0), 1.0)});
        auto rule = numerics::make_sphere_rule(3, 8);
        CHECK_THROWS_AS(g.check_boundary_hypotheses(rule), std::invalid_argument);
    }
}

TEST_CASE("vacuum family closed-form data") {
    SECTION("horizon radius, factor value, area radius, area") {
        SchwarzschildGeometry g31(1.0, 3);
        CHECK(g31.horizon_conformal_radius() == Catch::Approx(0.5));
        CHECK(g31.factor(0.5) == Catch::Approx(2.0));
        CHECK(g31.area_radius(0.5) == Catch::Approx(2.0));
        CHECK(g31.horizon_area() == Catch::Approx(16.0 * pi).epsilon(1e-14));

        SchwarzschildGeometry g41(1.0, 4);
        CHECK(g41.horizon_conformal_radius() == Catch::Approx(std::pow(2.0, -0.5)));
        CHECK(g41.factor(g41.horizon_conformal_radius()) == Catch::Approx(2.0));
        CHECK(g41.horizon_area() ==
              Catch::Approx(2.0 * pi * pi * std::pow(2.0, 1.5)).epsilon(1e-14));
        CHECK(g41.area_radius(g41.horizon_conformal_radius()) ==
              Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    }
    SECTION("negative mass zero sphere") {
        SchwarzschildGeometry g(-1.0, 3);
        CHECK(!g.has_horizon());
        CHECK(g.inner_radius() == Catch::Approx(0.5));
        CHECK(g.factor(0.5) == Catch::Approx(0.0).margin(1e-15));
        CHECK_THROWS_AS(g.factor(0.25), std::domain_error);
        CHECK_THROWS_AS(g.horizon_area(), std::domain_error);
    }
    SECTION("area-radius map scaling homogeneity") {
        for (int n : {3, 4, 5})
            for (double lam : {0.5, 2.0, 7.0})
                for (double r : {0.8, 1.7, 6.0}) {
                    SchwarzschildGeometry base(1.0, n), scaled(lam, n);
                    const double srate = std::pow(lam, 1.0 / (n - 2.0));
                    CHECK(scaled.area_radius(srate * r) ==
                          Catch::Approx(srate * base.area_radius(r)).epsilon(1e-10));
                }
    }
}

TEST_CASE("sphere inversion is an isometry of the m > 0 family") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logr(std::log(0.05), std::log(20.0));
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_point = [&](int n) {
        Vec x(n);
        for (auto& v : x) v = gauss(rng);
        const double scale = std::exp(logr(rng)) / norm(x);
        for (auto& v : x) v *= scale;
        return x;
    };
    SECTION("random points, m = 1, n = 3") {
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep)
            worst = std::max(worst, inversion_pullback_residual(1.0, 3, random_point(3)));
        CHECK(worst < 1e-9);
    }
    SECTION("random points, m = 2, n = 5") {
        double worst = 0.0;
        for (int rep = 0; rep < 50; ++rep)
            worst = std::max(worst, inversion_pullback_residual(2.0, 5, random_point(5)));
        CHECK(worst < 1e-9);
    }
    SECTION("fixed sphere and guards") {
        SchwarzschildGeometry g(1.0, 3);
        const double r0 = g.horizon_conformal_radius();
        CHECK(inversion_pullback_residual(1.0, 3, {r0, 0.0, 0.0}) < 1e-13);
        CHECK_THROWS_AS(inversion_pullback_residual(-1.0, 3, {1.0, 0.0, 0.0}),
                        std::domain_error);
    }
}

TEST_CASE("embedding profiles satisfy their defining equation") {
    SECTION("closed forms in dimension three") {
        EmbeddingProfile pos(1.0, 3);
        CHECK(pos.value(0.0) == Catch::Approx(2.0));
        for (double w : {0.0, 1.0, 5.5, -3.0}) CHECK(pos.residual(w) < 1e-12);
        EmbeddingProfile neg(-1.0, 3);
        for (double w : {4.5, 6.0, 9.0}) {
            CHECK(neg.residual(w) < 1e-12);
            CHECK(neg.induced_metric_defect(w) < 1e-10);
        }
        CHECK(neg.value(4.0) == Catch::Approx(0.0).margin(1e-14)); // tip of the cone point
    }
    SECTION("numeric profile, n = 4, positive mass") {
        EmbeddingProfile p(1.0, 4);
        for (double w : {0.25, 1.0, 3.0, 6.0}) {
            CHECK(p.residual(w) < 1e-8);
            CHECK(p.induced_metric_defect(w) < 1e-6);
        }
        CHECK(p.value(0.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SECTION("numeric profile, n = 5, both signs, finite blowup handled") {
        EmbeddingProfile p(1.0, 5);
        CHECK(p.w_limit() < 8.0); // profile reaches the cap before the nominal range
        for (double w : {0.2, 0.8, 1.1}) CHECK(p.residual(w) < 1e-7);
        EmbeddingProfile q(-1.0, 5);
        for (double w : {0.5, 1.0}) {
            CHECK(q.residual(w) < 1e-8);
            CHECK(q.induced_metric_defect(w) < 1e-6);
        }
    }
    SECTION("degenerate and out-of-range errors") {
        CHECK_THROWS_AS(EmbeddingProfile(0.0, 3), std::domain_error);
        EmbeddingProfile p(1.0, 4);
        CHECK_THROWS_AS(p.value(100.0), std::domain_error);
    }
}

TEST_CASE("spacetime chart components") {
    SECTION("flat member") {
        const Mat g = spacetime_components(0.0, 3, 1.0);
        CHECK(g(0, 0) == -1.0);
        CHECK(g(1, 1) == 1.0);
        CHECK(g(3, 3) == 1.0);
        CHECK(g(0, 1) == 0.0);
    }
    SECTION("exact values at a sample point") {
        const Mat g = spacetime_components(0.5, 3, 10.0);
        const double lapse = (1.0 - 0.05) / (1.0 + 0.05);
        CHECK(g(0, 0) == Catch::Approx(-lapse * lapse).epsilon(1e-15));
        CHECK(g(2, 2) == Catch::Approx(std::pow(1.05, 4.0)).epsilon(1e-15));
    }
    SECTION("asymptotic flatness and chart guard") {
        const Mat g = spacetime_components(1.0, 4, 100.0);
        CHECK(std::abs(g(0, 0) + 1.0) < 1e-3);
        CHECK(std::abs(g(1, 1) - 1.0) < 1e-3);
        CHECK_THROWS_AS(spacetime_components(1.0, 4, 1.0), std::domain_error);
        CHECK_THROWS_AS(spacetime_components(-1.0, 3, 0.9), std::domain_error);
        CHECK_NOTHROW(spacetime_components(-1.0, 3, 1.1));
    }
}

TEST_CASE("singularity resolutions") {
    const auto sigma = SurfaceSpec::sphere_at(Vec(3, 0.0), 0.5);
    auto rule = numerics::make_sphere_rule(3, 12);
    SECTION("negative mass model resolution") {
        auto phibar = fields::schwarzschild_conformal_factor(-1.0, 3);
        ZASResolution res(3, phibar, sigma);
        CHECK(res.surface_residual(rule) < 1e-10);
        for (std::size_t k = 0; k < rule.size(); k += 97)
            CHECK(res.normal_derivative(rule.node(k), DiffScheme::analytic_scheme()) ==
                  Catch::Approx(2.0).epsilon(1e-13));
    }
    SECTION("conformal background with unit factor on the surface") {
        auto phibar = fields::parse_field("(1 - 1/(2*r)) / (1 + (r - 0.5)^2)", 3);
        auto psi = fields::parse_field("1 + (r - 0.5)^2", 3);
        ZASResolution res(3, phibar, sigma, psi);
        CHECK(res.surface_residual(rule) < 1e-10);
        CHECK(res.background_factor({0.5, 0.0, 0.0}) == Catch::Approx(1.0));
        CHECK(res.background_area_element({0.0, 0.5, 0.0}) == Catch::Approx(1.0));
        for (std::size_t k = 0; k < rule.size(); k += 97)
            CHECK(res.normal_derivative(rule.node(k), DiffScheme::analytic_scheme()) ==
                  Catch::Approx(2.0).epsilon(1e-12));
    }
    SECTION("dimension guards") {
        auto phibar = fields::schwarzschild_conformal_factor(-1.0, 3);
        CHECK_THROWS_AS(ZASResolution(4, phibar, sigma), std::invalid_argument);
    }
}
