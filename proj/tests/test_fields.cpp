#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "afmass/fields/builtin.hpp"
#include "afmass/fields/expression.hpp"
#include "afmass/fields/polynomial.hpp"
#include "afmass/numerics/derivatives.hpp"

using namespace afmass;
using namespace afmass::fields;
using afmass::numerics::DiffScheme;

namespace {

// Compare analytic derivatives of a field against central differences at x.
void check_derivatives_against_fd(const ScalarField& f, const Vec& x, double tol) {
    auto value = [&](const Vec& y) { return f.value(y); };
    const DiffScheme fd = DiffScheme::fd_scheme();
    const Vec g = f.gradient(x);
    const Vec gf = numerics::fd_gradient(value, x, fd.step(1, x));
    for (int i = 0; i < f.dim(); ++i) CHECK(std::abs(g[i] - gf[i]) < tol);
    const Mat h = f.hessian(x);
    const Mat hf = numerics::fd_hessian(value, x, fd.step(2, x));
    for (int i = 0; i < f.dim(); ++i)
        for (int j = 0; j < f.dim(); ++j) CHECK(std::abs(h(i, j) - hf(i, j)) < tol);
    const Ten3 t = f.third(x);
    const Ten3 tf = numerics::fd_third(value, x, fd.step(3, x));
    for (int i = 0; i < f.dim(); ++i)
        for (int j = 0; j < f.dim(); ++j)
            for (int k = 0; k < f.dim(); ++k) CHECK(std::abs(t(i, j, k) - tf(i, j, k)) < 10 * tol);
}

} // namespace

TEST_CASE("polynomial fields carry exact partials") {
    // p = x^2 y + 3 y z^3
    PolynomialField p(3, {{1.0, {2, 1, 0}}, {3.0, {0, 1, 3}}});
    const Vec x{1.5, -2.0, 0.5};
    CHECK(p.value(x) == Catch::Approx(1.5 * 1.5 * -2.0 + 3.0 * -2.0 * 0.125).epsilon(1e-15));
    const Vec g = p.gradient(x);
    CHECK(g[0] == Catch::Approx(2.0 * 1.5 * -2.0).epsilon(1e-15));
    CHECK(g[1] == Catch::Approx(1.5 * 1.5 + 3.0 * 0.125).epsilon(1e-15));
    CHECK(g[2] == Catch::Approx(9.0 * -2.0 * 0.25).epsilon(1e-15));
    const Mat h = p.hessian(x);
    CHECK(h(0, 1) == Catch::Approx(3.0).epsilon(1e-15));
    CHECK(h(2, 2) == Catch::Approx(18.0 * -2.0 * 0.5).epsilon(1e-15));
    const Ten3 t = p.third(x);
    CHECK(t(0, 0, 1) == Catch::Approx(2.0).epsilon(1e-15));
    CHECK(t(1, 2, 2) == Catch::Approx(18.0 * 0.5).epsilon(1e-15));
    CHECK(t(2, 2, 2) == Catch::Approx(18.0 * -2.0).epsilon(1e-15));
    CHECK(t(0, 1, 2) == 0.0);
}

TEST_CASE("random polynomials are seed-deterministic") {
    std::mt19937_64 a(42), b(42), c(43);
    PolynomialField pa = random_polynomial(3, 4, a);
    PolynomialField pb = random_polynomial(3, 4, b);
    PolynomialField pc = random_polynomial(3, 4, c);
    const Vec x{0.3, -0.7, 1.1};
    CHECK(pa.value(x) == pb.value(x));
    CHECK(pa.value(x) != pc.value(x));
}

TEST_CASE("expression parsing: values and exact derivatives") {
    SECTION("polynomial in coordinates") {
        auto f = parse_field("x1^2*x2 - 3*x3 + 0.5", 3);
        const Vec x{2.0, -1.0, 4.0};
        CHECK(f->value(x) == Catch::Approx(-4.0 - 12.0 + 0.5).epsilon(1e-15));
        check_derivatives_against_fd(*f, x, 1e-6);
    }
    SECTION("radius symbol and chain rule") {
        auto f = parse_field("1 + 1/(2*r)", 3);
        const Vec x{3.0, 0.0, 4.0}; // r = 5
        CHECK(f->value(x) == Catch::Approx(1.1).epsilon(1e-15));
        const Vec g = f->gradient(x);
        // d/dx_i (1/(2r)) = -x_i / (2 r^3)
        CHECK(g[0] == Catch::Approx(-3.0 / 250.0).epsilon(1e-12));
        CHECK(g[2] == Catch::Approx(-4.0 / 250.0).epsilon(1e-12));
        check_derivatives_against_fd(*f, x, 1e-6);
    }
    SECTION("named functions and powers") {
        auto f = parse_field("sqrt(8*(r - 2))", 3);
        const Vec x{3.0, 0.0, 0.0};
        CHECK(f->value(x) == Catch::Approx(std::sqrt(8.0)).epsilon(1e-15));
        check_derivatives_against_fd(*f, x, 1e-5);

        auto g = parse_field("exp(-r^2) + log(x1) + abs(x2)", 2);
        const Vec y{1.5, 2.0};
        CHECK(g->value(y) ==
              Catch::Approx(std::exp(-(1.5 * 1.5 + 4.0)) + std::log(1.5) + 2.0).epsilon(1e-14));
        check_derivatives_against_fd(*g, y, 1e-5);
    }
    SECTION("quartic-root example used by the graph suite") {
        auto f = parse_field("(1 + r^2)^0.25", 3);
        const Vec x{0.6, -0.8, 0.0}; // r = 1
        CHECK(f->value(x) == Catch::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
        check_derivatives_against_fd(*f, x, 1e-6);
    }
    SECTION("unary minus, signed exponents, scientific literals") {
        auto f = parse_field("-x1 + r^-2 + 1.5e-1", 2);
        const Vec x{1.0, 1.0};
        CHECK(f->value(x) == Catch::Approx(-1.0 + 0.5 + 0.15).epsilon(1e-14));
        check_derivatives_against_fd(*f, x, 1e-6);
    }
}

TEST_CASE("expression parsing: errors carry byte offsets") {
    auto offset_of = [](const std::string& s, int n) -> std::size_t {
        try {
            parse_field(s, n);
        } catch (const ParseError& e) {
            return e.offset();
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("1 +", 3) == 3);            // missing right operand
    CHECK(offset_of("x4", 3) == 0);             // coordinate outside dimension
    CHECK(offset_of("2 * foo(r)", 3) == 4);     // unknown identifier
    CHECK(offset_of("(1 + 2", 3) == 6);         // unbalanced parenthesis
    CHECK(offset_of("1 + 2) * 3", 3) == 5);     // trailing input
    CHECK(offset_of("x1 ^ x2", 3) == 5);        // exponent must be a literal
    CHECK_THROWS_AS(parse_field("", 3), ParseError);
    CHECK_NOTHROW(parse_field("1 + 2*x1", 3));
}

TEST_CASE("declared singular spheres feed the stencil guard") {
    auto f = parse_field("sqrt(8*(r - 2))", 3);
    f->declare_singular_sphere(Vec(3, 0.0), 2.0);
    CHECK(f->singular_distance({3.0, 0.0, 0.0}) == Catch::Approx(1.0));
    CHECK(f->singular_distance({0.5, 0.0, 0.0}) == Catch::Approx(1.5));
    CHECK_THROWS_AS(
        numerics::gradient(*f, {2.0000001, 0.0, 0.0}, DiffScheme::fd_scheme()),
        std::domain_error);
}

TEST_CASE("conformal factor families") {
    SECTION("positive mass profile is harmonic with the right falloff") {
        for (int n : {3, 4, 5}) {
            auto u = schwarzschild_conformal_factor(1.0, n);
            const Vec x = [&] {
                Vec v(n, 0.0);
                v[0] = 1.2;
                v[n - 1] = -0.9;
                return v;
            }();
            CHECK(std::abs(numerics::laplacian(*u, x, DiffScheme::analytic_scheme())) < 1e-12);
            check_derivatives_against_fd(*u, x, 1e-5);
            CHECK(u->decay_exponent() == Catch::Approx(n - 2.0));
        }
        auto u3 = schwarzschild_conformal_factor(1.0, 3);
        CHECK(u3->value({2.0, 0.0, 0.0}) == Catch::Approx(1.25).epsilon(1e-15));
    }
    SECTION("negative mass cuts off at the zero sphere") {
        auto u = schwarzschild_conformal_factor(-1.0, 3);
        CHECK(u->r_min() == Catch::Approx(0.5).epsilon(1e-15));
        CHECK(u->value({0.5, 0.0, 0.0}) == Catch::Approx(0.0).margin(1e-15));
        CHECK_THROWS_AS(u->value({0.25, 0.0, 0.0}), std::domain_error);
    }
    SECTION("two-center factor superposes bumps") {
        const Vec c1{1.0, 0.0, 0.0}, c2{-1.0, 0.0, 0.0};
        auto u = multi_center_factor(3, {0.5, 0.25}, {c1, c2});
        const Vec x{0.0, 2.0, 0.0};
        const double d = std::sqrt(5.0);
        CHECK(u->value(x) == Catch::Approx(1.0 + 0.25 / d + 0.125 / d).epsilon(1e-14));
        CHECK(std::abs(numerics::laplacian(*u, x, DiffScheme::analytic_scheme())) < 1e-13);
    }
    SECTION("capped profile matches value and slope at the seam") {
        for (int n : {3, 5}) {
            auto u = capped_schwarzschild_factor(2.0, n);
            const double eps = 1e-9;
            CHECK(std::abs(u->profile_value(1.0 - eps) - u->profile_value(1.0 + eps)) < 1e-8);
            CHECK(std::abs(u->profile_d1(1.0 - eps) - u->profile_d1(1.0 + eps)) < 1e-7);
            // Interior Laplacian is the constant -n m (n-2) / 2.
            Vec x(n, 0.0);
            x[0] = 0.5;
            CHECK(numerics::laplacian(*u, x, DiffScheme::analytic_scheme()) ==
                  Catch::Approx(-n * 2.0 * (n - 2.0) / 2.0).epsilon(1e-12));
            // Exterior equals the uncapped profile.
            auto v = schwarzschild_conformal_factor(2.0, n);
            CHECK(u->profile_value(3.0) == Catch::Approx(v->profile_value(3.0)).epsilon(1e-15));
        }
    }
}

TEST_CASE("graph profile families") {
    SECTION("rotationally symmetric throat profile") {
        auto f = schwarzschild_graph_profile(1.0, 3);
        CHECK(f->r_min() == Catch::Approx(2.0));
        CHECK(f->profile_value(2.0) == 0.0);
        // 1 + f'^2 = 1 / (1 - 2m/r)
        for (double r : {2.5, 4.0, 10.0}) {
            const double fp = f->profile_d1(r);
            CHECK(1.0 + fp * fp == Catch::Approx(1.0 / (1.0 - 2.0 / r)).epsilon(1e-13));
        }
        check_derivatives_against_fd(*f, {4.0, 1.0, -2.0}, 1e-5);
        CHECK_THROWS_AS(schwarzschild_graph_profile(1.0, 4), std::domain_error);
        CHECK_THROWS_AS(schwarzschild_graph_profile(-1.0, 3), std::domain_error);
    }
    SECTION("smooth step is C^3 with unit plateau") {
        auto s = smooth_step_radial(3, 1.0, 2.0, Vec(3, 0.0));
        CHECK(s->profile_value(0.5) == 0.0);
        CHECK(s->profile_value(2.5) == 1.0);
        CHECK(s->profile_value(1.5) == Catch::Approx(0.5).epsilon(1e-13));
        for (double r : {1.0 + 1e-7, 2.0 - 1e-7}) {
            const double plateau = r < 1.5 ? 0.0 : 1.0;
            CHECK(std::abs(s->profile_value(r) - plateau) < 1e-20 + 1e-6);
            CHECK(std::abs(s->profile_d1(r)) < 1e-5);
            CHECK(std::abs(s->profile_d2(r)) < 1e-3);
            CHECK(std::abs(s->profile_d3(r)) < 1e-1);
        }
        check_derivatives_against_fd(*s, {1.3, 0.4, -0.2}, 1e-3);
    }
    SECTION("glued throats reduce to single profiles near each center") {
        const Vec c1{-8.0, 0.0, 0.0}, c2{8.0, 0.0, 0.0};
        auto f = glued_graph_throats(1.0, c1, 0.25, c2, 3.0, 6.0);
        auto f1 = schwarzschild_graph_profile(1.0, 3);
        auto f2 = schwarzschild_graph_profile(0.25, 3);
        const Vec near1{-5.5, 0.5, 0.0}; // |x - c1| < 3, |x - c2| > 6
        CHECK(f->value(near1) ==
              Catch::Approx(f1->profile_value(norm(near1 - c1))).epsilon(1e-13));
        const Vec far{0.0, 12.0, 0.0}; // outside both blend balls
        CHECK(f->value(far) == Catch::Approx(f1->profile_value(norm(far - c1)) +
                                             f2->profile_value(norm(far - c2)))
                                   .epsilon(1e-13));
        check_derivatives_against_fd(*f, {4.2, 1.0, 0.7}, 1e-3);
        CHECK_THROWS_AS(glued_graph_throats(1.0, c1, 1.0, c2, 1.0, 6.0), std::invalid_argument);
        CHECK_THROWS_AS(glued_graph_throats(1.0, c1, 1.0, c2, 3.0, 15.0), std::invalid_argument);
    }
}

TEST_CASE("sum and product fields combine derivatives") {
    auto a = parse_field("x1^2 * x2", 3);
    auto b = parse_field("exp(-r^2)", 3);
    ProductField prod(a, b);
    SumField sum(3, {a, b});
    const Vec x{0.7, -0.4, 0.2};
    CHECK(prod.value(x) == Catch::Approx(a->value(x) * b->value(x)).epsilon(1e-15));
    CHECK(sum.value(x) == Catch::Approx(a->value(x) + b->value(x)).epsilon(1e-15));
    check_derivatives_against_fd(prod, x, 1e-6);
    check_derivatives_against_fd(sum, x, 1e-6);
}
