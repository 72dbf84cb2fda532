#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "afmass/fields/builtin.hpp"
#include "afmass/fields/expression.hpp"
#include "afmass/mass/reports.hpp"
#include "afmass/mass/zas.hpp"
#include "afmass/metrics/instance.hpp"

using namespace afmass;
using namespace afmass::mass;
using afmass::fields::parse_field;
using afmass::metrics::ConformalMetric;
using afmass::metrics::SurfaceSpec;
using afmass::metrics::ZASResolution;
using afmass::numerics::DiffScheme;
using afmass::numerics::pi;

namespace {
const DiffScheme kAnalytic = DiffScheme::analytic_scheme();
const SurfaceSpec kUnitSphere = SurfaceSpec::sphere_at(Vec(3, 0.0), 1.0);
} // namespace

TEST_CASE("regular mass of resolved singular spheres") {
    const auto rule = numerics::make_sphere_rule(3, 12);
    SECTION("negative vacuum masses are recovered") {
        for (double m : {-1.0, -2.0}) {
            const auto inst = metrics::make_schwarzschild_instance(m, 3);
            REQUIRE(inst.resolutions.size() == 1);
            CHECK(zas_regular_mass(inst.resolutions[0], rule, kAnalytic) ==
                  Catch::Approx(m).epsilon(1e-6));
        }
    }
    SECTION("constant normal derivative has a closed-form mass") {
        // nubar(phibar) = c on the unit sphere gives -2 c^2 in three dimensions.
        const double c = 3.0;
        ZASResolution res(3, parse_field("3*(r - 1)", 3), kUnitSphere);
        CHECK(zas_regular_mass(res, rule, kAnalytic) ==
              Catch::Approx(-2.0 * c * c).epsilon(1e-12));
    }
    SECTION("nonpositive normal derivatives break regularity") {
        ZASResolution res(3, parse_field("(r - 1)*(0.5 - x1)", 3), kUnitSphere);
        CHECK_THROWS_AS(zas_regular_mass(res, rule, kAnalytic), std::domain_error);
    }
    SECTION("rule dimension must match the resolution") {
        ZASResolution res(3, parse_field("r - 1", 3), kUnitSphere);
        CHECK_THROWS_AS(zas_regular_mass(res, numerics::make_sphere_rule(4, 8), kAnalytic),
                        std::invalid_argument);
    }
}

TEST_CASE("regular mass is invariant under a change of resolution") {
    const auto rule = numerics::make_sphere_rule(3, 12);
    const auto plain = metrics::make_schwarzschild_instance(-1.0, 3).resolutions[0];

    // Divide the resolving function by a positive factor equal to one on the
    // singular sphere and absorb it into the background metric.
    const auto sigma = SurfaceSpec::sphere_at(Vec(3, 0.0), 0.5);
    ZASResolution rescaled(3, parse_field("(1 - 1/(2*r)) / (1 + (r - 0.5)^2)", 3), sigma,
                           parse_field("1 + (r - 0.5)^2", 3));

    const double a = zas_regular_mass(plain, rule, kAnalytic);
    const double b = zas_regular_mass(rescaled, rule, kAnalytic);
    CHECK(b == Catch::Approx(a).epsilon(1e-8));
}

TEST_CASE("singular mass limit along shrinking spheres") {
    const auto rule = numerics::make_sphere_rule(3, 12);
    const std::vector<double> gaps{0.4, 0.2, 0.1, 0.05, 0.025};
    SECTION("sequence values match the closed forms") {
        const auto g1 = *metrics::make_schwarzschild_instance(-1.0, 3).conformal;
        const double r1 = 0.9; // v(r) = -(2r+1)^2 / (8r)
        CHECK(zas_sequence_value(g1, r1, rule, kAnalytic) ==
              Catch::Approx(-(2.0 * r1 + 1.0) * (2.0 * r1 + 1.0) / (8.0 * r1)).epsilon(1e-10));

        const auto g2 = *metrics::make_schwarzschild_instance(-2.0, 3).conformal;
        const double r2 = 1.4; // v(r) = -(r+1)^2 / (2r)
        CHECK(zas_sequence_value(g2, r2, rule, kAnalytic) ==
              Catch::Approx(-(r2 + 1.0) * (r2 + 1.0) / (2.0 * r2)).epsilon(1e-10));
    }
    SECTION("negative vacuum limits") {
        for (double m : {-1.0, -2.0}) {
            const auto g = *metrics::make_schwarzschild_instance(m, 3).conformal;
            const double r_sing = g.excluded()->radii[0];
            std::vector<double> radii;
            for (double h : gaps) radii.push_back(r_sing + h);
            const auto est = zas_mass_limit(g, radii, rule, kAnalytic);
            CHECK(est.value == Catch::Approx(m).epsilon(1e-2));
        }
    }
    SECTION("flat space points carry no singular mass") {
        ConformalMetric flat(3, std::make_shared<fields::ConstantField>(3, 1.0));
        CHECK(zas_sequence_value(flat, 0.3, rule, kAnalytic) ==
              Catch::Approx(-0.15).epsilon(1e-12));
        const auto est = zas_mass_limit(flat, gaps, rule, kAnalytic);
        CHECK(std::abs(est.value) < 1e-10);
    }
    SECTION("nonpositive mean curvature is a convention error") {
        const auto g = *metrics::make_schwarzschild_instance(1.0, 3).conformal;
        CHECK_THROWS_AS(zas_sequence_value(g, 0.3, rule, kAnalytic), std::domain_error);
    }
    SECTION("radius list guards") {
        const auto g = *metrics::make_schwarzschild_instance(-1.0, 3).conformal;
        CHECK_THROWS_AS(zas_mass_limit(g, {0.9}, rule, kAnalytic), std::invalid_argument);
        CHECK_THROWS_AS(zas_mass_limit(g, {0.7, 0.8}, rule, kAnalytic), std::invalid_argument);
        CHECK_THROWS_AS(zas_mass_limit(g, {0.9, 0.4}, rule, kAnalytic), std::domain_error);
    }
}

TEST_CASE("quasi-local mass along the vacuum foliation") {
    const auto rule = numerics::make_sphere_rule(3, 12);
    const auto inst = metrics::make_schwarzschild_instance(1.0, 3);
    const auto& g = *inst.conformal;
    SECTION("constant along the foliation") {
        double worst = 0.0;
        const double r_lo = 1.32, r_hi = 96.0;
        for (int k = 0; k < 20; ++k) {
            const double r = r_lo * std::pow(r_hi / r_lo, k / 19.0);
            const auto s = SurfaceSpec::sphere_at(Vec(3, 0.0), r);
            worst = std::max(worst, std::abs(quasilocal_mass(g, s, rule, kAnalytic) - 1.0));
        }
        CHECK(worst < 1e-6);
    }
    SECTION("the horizon value is the boundary-area mass") {
        const auto s = SurfaceSpec::sphere_at(Vec(3, 0.0), 0.5);
        const double ml = quasilocal_mass(g, s, rule, kAnalytic);
        CHECK(ml == Catch::Approx(black_hole_mass({16.0 * pi}, 3)).epsilon(1e-12));
    }
    SECTION("flat spheres carry none") {
        ConformalMetric flat(3, std::make_shared<fields::ConstantField>(3, 1.0));
        const auto s = SurfaceSpec::sphere_at(Vec(3, 0.0), 3.0);
        CHECK(std::abs(quasilocal_mass(flat, s, rule, kAnalytic)) < 1e-12);
    }
    SECTION("negative mean curvature is rejected") {
        const auto s = SurfaceSpec::sphere_at(Vec(3, 0.0), 0.3);
        CHECK_THROWS_AS(quasilocal_mass(g, s, rule, kAnalytic), std::domain_error);
    }
    SECTION("instance entry point accepts only conformally flat families") {
        const auto s = SurfaceSpec::sphere_at(Vec(3, 0.0), 2.0);
        CHECK(quasilocal_mass(inst, s, rule, kAnalytic) ==
              Catch::Approx(quasilocal_mass(g, s, rule, kAnalytic)).epsilon(1e-14));
        const auto graph_inst = metrics::make_graph_instance(
            "q", 3, parse_field("(1 + x1^2 + x2^2 + x3^2)^0.25", 3), {}, 2.0);
        CHECK_THROWS_AS(quasilocal_mass(graph_inst, s, rule, kAnalytic), std::invalid_argument);
    }
}

TEST_CASE("combined lower-bound reports") {
    SECTION("vacuum equality with a single horizon") {
        const auto inst = metrics::make_schwarzschild_instance(1.0, 3);
        const auto rep =
            combined_report(inst, {SurfaceSpec::sphere_at(Vec(3, 0.0), 0.5)}, {});
        CHECK(rep.instance_id == "schwarzschild");
        CHECK(rep.mass == Catch::Approx(1.0).epsilon(1e-3));
        CHECK(rep.m_bh == Catch::Approx(1.0).epsilon(1e-9));
        CHECK(rep.m_zas == 0.0);
        CHECK_FALSE(rep.approximate_horizons);
        REQUIRE(rep.checks.size() == 1);
        CHECK(rep.checks[0].satisfied);
        CHECK(rep.checks[0].equality);
        CHECK(rep.all_satisfied());
    }
    SECTION("negative vacuum equality with its singular sphere") {
        const auto inst = metrics::make_schwarzschild_instance(-1.0, 3);
        CombinedOptions opt;
        opt.tol = 1e-2;
        const auto rep = combined_report(inst, {}, inst.resolutions, opt);
        CHECK(rep.mass == Catch::Approx(-1.0).epsilon(1e-3));
        CHECK(rep.m_bh == 0.0);
        CHECK(rep.m_zas == Catch::Approx(-1.0).epsilon(1e-6));
        CHECK(rep.checks[0].satisfied);
        CHECK(rep.checks[0].equality);
    }
    SECTION("opposite-mass pairs approach the equality case with separation") {
        auto report_gap = [&](double d) {
            const Vec c1{-0.5 * d, 0.0, 0.0}, c2{0.5 * d, 0.0, 0.0};
            const auto u = fields::multi_center_factor(3, {1.0, -1.0}, {c1, c2});
            auto inst = metrics::make_conformal_instance(
                "opposite-pair", 3, u, 1.0, SurfaceSpec::sphere_at(c2, 0.5));
            inst.asymptotic_radius = 2.0 * d;
            ZASResolution res(3, u, SurfaceSpec::sphere_at(c2, 0.5));
            const auto rep =
                combined_report(inst, {SurfaceSpec::sphere_at(c1, 0.5)}, {res});
            CHECK(rep.approximate_horizons); // coordinate sphere, not exactly minimal
            CHECK(std::abs(rep.mass) < 0.02);
            return std::abs(rep.checks[0].lhs - rep.checks[0].rhs);
        };
        const double gap_near = report_gap(50.0);
        const double gap_far = report_gap(200.0);
        CHECK(gap_far < 0.5 * gap_near);
        CHECK(gap_far < 0.02);
    }
    SECTION("only conformally flat instances are in scope") {
        const auto graph_inst = metrics::make_graph_instance(
            "g", 3, parse_field("(1 + x1^2 + x2^2 + x3^2)^0.25", 3), {}, 2.0);
        CHECK_THROWS_AS(combined_report(graph_inst, {}, {}), std::invalid_argument);
    }
    SECTION("resolution dimensions must match the instance") {
        const auto inst = metrics::make_schwarzschild_instance(1.0, 3);
        ZASResolution res4(4, parse_field("r - 1", 4),
                           SurfaceSpec::sphere_at(Vec(4, 0.0), 1.0));
        CHECK_THROWS_AS(combined_report(inst, {}, {res4}), std::invalid_argument);
    }
}
