#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "afmass/fields/polynomial.hpp"
#include "afmass/fields/scalar_field.hpp"
#include "afmass/numerics/constants.hpp"
#include "afmass/numerics/derivatives.hpp"
#include "afmass/numerics/extrapolate.hpp"
#include "afmass/numerics/sphere_rule.hpp"
#include "afmass/numerics/sum.hpp"
#include "afmass/numerics/volume_rule.hpp"

using namespace afmass;
using namespace afmass::numerics;

namespace {

// Gamma(k/2) by the half-integer recurrence; exact to rounding.
double gamma_half(int twice_z) {
    double g = (twice_z % 2 == 0) ? 1.0 : std::sqrt(pi);
    for (double z = (twice_z % 2 == 0) ? 1.0 : 0.5; z < twice_z / 2.0 - 0.25; z += 1.0) g *= z;
    return g;
}

// Closed form for the unit-sphere integral of prod x_i^{a_i}: zero unless all
// exponents are even, else 2 prod Gamma((a_i+1)/2) / Gamma((|a|+n)/2).
double monomial_sphere_integral(const std::vector<int>& a) {
    int total = 0;
    for (int e : a) {
        if (e % 2 != 0) return 0.0;
        total += e;
    }
    double num = 2.0;
    for (int e : a) num *= gamma_half(e + 1);
    return num / gamma_half(total + static_cast<int>(a.size()));
}

double eval_monomial(const Vec& x, const std::vector<int>& a) {
    double v = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int e = 0; e < a[i]; ++e) v *= x[i];
    return v;
}

} // namespace

TEST_CASE("unit sphere measure matches closed forms") {
    CHECK(unit_sphere_measure(2) == Catch::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_measure(3) == Catch::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_measure(4) == Catch::Approx(2.0 * pi * pi).epsilon(1e-15));
    CHECK(unit_sphere_measure(5) == Catch::Approx(8.0 * pi * pi / 3.0).epsilon(1e-15));
    CHECK(unit_sphere_measure(8) == Catch::Approx(std::pow(pi, 4) / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(unit_sphere_measure(1), std::domain_error);
}

TEST_CASE("sphere rule weights, node norms, and symmetry") {
    for (int n = 3; n <= 6; ++n) {
        const int degree = n <= 5 ? 20 : 10;
        SphereRule rule = make_sphere_rule(n, degree);
        const double omega = unit_sphere_measure(n);
        CHECK(std::abs(pairwise_sum(rule.weights) - omega) < 1e-12 * omega);
        double worst = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k)
            worst = std::max(worst, std::abs(norm(rule.node(k)) - 1.0));
        CHECK(worst < 1e-12);
        // Odd monomials integrate to zero by node symmetry.
        std::vector<int> a(n, 0);
        a[0] = 1;
        CHECK(std::abs(integrate_unit_sphere(rule, [&](const Vec& x) { return eval_monomial(x, a); })) <
              1e-10);
        a[0] = 2;
        a[n - 1] = 3;
        CHECK(std::abs(integrate_unit_sphere(rule, [&](const Vec& x) { return eval_monomial(x, a); })) <
              1e-10);
    }
    CHECK_THROWS_AS(make_sphere_rule(7, 20), std::domain_error); // node-count guard
}

TEST_CASE("sphere rule is exact on polynomials through degree 20") {
    struct Case {
        int n;
        std::vector<int> a;
    };
    const Case cases[] = {
        {3, {0, 0, 0}},  {3, {2, 0, 0}},  {3, {20, 0, 0}}, {3, {8, 6, 4}},
        {3, {6, 6, 6}},  {4, {0, 0, 0, 0}}, {4, {2, 2, 2, 2}}, {4, {10, 4, 4, 2}},
        {5, {4, 4, 4, 4, 4}}, {5, {12, 2, 2, 2, 2}},
    };
    for (const auto& c : cases) {
        SphereRule rule = make_sphere_rule(c.n, 20);
        const double got =
            integrate_unit_sphere(rule, [&](const Vec& x) { return eval_monomial(x, c.a); });
        const double want = monomial_sphere_integral(c.a);
        CAPTURE(c.n, c.a);
        CHECK(std::abs(got - want) < 1e-11 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("sphere integrals over coordinate spheres") {
    SphereRule rule = make_sphere_rule(3, 20);
    const Vec origin(3, 0.0);

    CHECK(integrate_sphere(rule, origin, 1.0, [](const Vec&) { return 1.0; }) ==
          Catch::Approx(4.0 * pi).epsilon(1e-13));
    CHECK(integrate_sphere(rule, origin, 1.0, [](const Vec& x) {
              const double r = norm(x);
              return (x[0] / r) * (x[0] / r);
          }) == Catch::Approx(4.0 * pi / 3.0).epsilon(1e-12));
    // Constant on a half-radius sphere; the value the ZAS regular-mass check uses.
    const double c = std::pow(2.0, 4.0 / 3.0);
    CHECK(integrate_sphere(rule, origin, 0.5, [&](const Vec&) { return c; }) ==
          Catch::Approx(c * pi).epsilon(1e-13));
    CHECK_THROWS_AS(integrate_sphere(rule, origin, 0.0, [](const Vec&) { return 1.0; }),
                    std::domain_error);
    // Radius scaling r^{n-1} on an off-center sphere.
    const Vec center{1.0, -2.0, 0.5};
    CHECK(integrate_sphere(rule, center, 3.0, [](const Vec&) { return 1.0; }) ==
          Catch::Approx(36.0 * pi).epsilon(1e-13));
}

TEST_CASE("volume rule reproduces shells, caps, and tails") {
    SECTION("shell volume, n = 3 and n = 4") {
        for (int n : {3, 4}) {
            VolumeRule rule(make_sphere_rule(n, 12), 1.0, 2.0);
            const auto est = integrate_exterior_volume(rule, [](const Vec&) { return 1.0; });
            const double want =
                unit_sphere_measure(n) / n * (std::pow(2.0, n) - 1.0);
            CHECK(std::abs(est.value - want) < 1e-8 * want);
            CHECK(est.error < 1e-10 * want);
        }
    }
    SECTION("zero field") {
        VolumeRule rule(make_sphere_rule(3, 8), 0.0, 5.0);
        CHECK(integrate_exterior_volume(rule, [](const Vec&) { return 0.0; }).value == 0.0);
    }
    SECTION("piecewise constant with a breakpoint: 3/2 on the unit ball") {
        VolumeRule rule(make_sphere_rule(3, 8), 0.0, 4.0);
        rule.breakpoints = {1.0};
        const auto est = integrate_exterior_volume(
            rule, [](const Vec& x) { return norm(x) < 1.0 ? 1.5 : 0.0; });
        CHECK(est.value == Catch::Approx(2.0 * pi).epsilon(1e-12));
    }
    SECTION("decaying tail 1/|x|^4 outside the unit ball") {
        VolumeRule rule(make_sphere_rule(3, 8), 1.0,
                        std::numeric_limits<double>::infinity());
        const auto est = integrate_exterior_volume(rule, [](const Vec& x) {
            const double r2 = dot(x, x);
            return 1.0 / (r2 * r2);
        });
        CHECK(est.value == Catch::Approx(4.0 * pi).epsilon(1e-10));
    }
    SECTION("square-root endpoint substitution") {
        VolumeRule rule(make_sphere_rule(3, 8), 2.0, 3.0);
        rule.sqrt_singular_start = true;
        const auto est = integrate_exterior_volume(
            rule, [](const Vec& x) { return 1.0 / std::sqrt(norm(x) - 2.0); });
        CHECK(est.value == Catch::Approx(4.0 * pi * 166.0 / 15.0).epsilon(1e-12));
    }
    SECTION("non-integrable endpoint raises") {
        VolumeRule rule(make_sphere_rule(3, 6), 2.0, 3.0);
        rule.sqrt_singular_start = true;
        CHECK_THROWS_AS(integrate_exterior_volume(
                            rule, [](const Vec& x) { return std::pow(norm(x) - 2.0, -1.5); }),
                        std::domain_error);
    }
    SECTION("divergence theorem consistency on a shell") {
        // V = x e^{-|x|^2}: div V = (3 - 2 |x|^2) e^{-|x|^2} in n = 3.
        SphereRule sphere = make_sphere_rule(3, 16);
        VolumeRule rule(make_sphere_rule(3, 16), 0.5, 2.5);
        const auto vol = integrate_exterior_volume(rule, [](const Vec& x) {
            const double r2 = dot(x, x);
            return (3.0 - 2.0 * r2) * std::exp(-r2);
        });
        auto flux = [&](double r) {
            return integrate_sphere_flux(sphere, Vec(3, 0.0), r, [](const Vec& x, const Vec& nu) {
                const double g = std::exp(-dot(x, x));
                return g * dot(x, nu);
            });
        };
        const double want = flux(2.5) - flux(0.5);
        CHECK(std::abs(vol.value - want) < 1e-6 * std::abs(want));
    }
}

TEST_CASE("finite differences against exact polynomial partials") {
    std::mt19937_64 rng(20260819);
    for (int n : {2, 3, 4}) {
        fields::PolynomialField poly = fields::random_polynomial(n, 3, rng);
        auto value = [&](const Vec& y) { return poly.value(y); };
        std::uniform_real_distribution<double> pt(-1.0, 1.0);
        for (int rep = 0; rep < 5; ++rep) {
            Vec x(n);
            for (auto& v : x) v = pt(rng);
            const DiffScheme fd = DiffScheme::fd_scheme();
            const Vec g = fd_gradient(value, x, fd.step(1, x));
            const Mat h = fd_hessian(value, x, fd.step(2, x));
            const Ten3 t = fd_third(value, x, fd.step(3, x));
            const Vec ge = poly.gradient(x);
            const Mat he = poly.hessian(x);
            const Ten3 te = poly.third(x);
            for (int i = 0; i < n; ++i) CHECK(std::abs(g[i] - ge[i]) < 1e-7);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    CHECK(std::abs(h(i, j) - he(i, j)) < 1e-7);
                    CHECK(h(i, j) == h(j, i)); // symmetric by construction
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) CHECK(std::abs(t(i, j, k) - te(i, j, k)) < 1e-6);
        }
    }
}

TEST_CASE("derivative dispatch, harmonic check, and guards") {
    fields::RadialProfile p;
    p.u = [](double r) { return 1.0 + 0.5 / r; };
    p.du = [](double r) { return -0.5 / (r * r); };
    p.d2u = [](double r) { return 1.0 / (r * r * r); };
    p.d3u = [](double r) { return -3.0 / (r * r * r * r); };
    fields::RadialField u(3, std::move(p), 0.0, {}, true);

    const Vec x{1.0, 0.0, 0.0};
    SECTION("harmonic conformal factor has zero Laplacian") {
        CHECK(std::abs(laplacian(u, x, DiffScheme::analytic_scheme())) < 1e-14);
        CHECK(std::abs(laplacian(u, x, DiffScheme::fd_scheme())) < 1e-6);
    }
    SECTION("gradient dispatch agrees across modes") {
        const Vec ga = gradient(u, x, DiffScheme::analytic_scheme());
        const Vec gf = gradient(u, x, DiffScheme::fd_scheme());
        for (int i = 0; i < 3; ++i) CHECK(std::abs(ga[i] - gf[i]) < 1e-9);
    }
    SECTION("analytic mode on a value-only field is refused") {
        fields::LambdaField lf(3, [](const Vec& y) { return dot(y, y); });
        CHECK_THROWS_AS(gradient(lf, x, DiffScheme::analytic_scheme()), std::invalid_argument);
        const Vec g = gradient(lf, x, DiffScheme::fd_scheme());
        CHECK(g[0] == Catch::Approx(2.0).margin(1e-8));
    }
    SECTION("stencils refuse to straddle the singular set") {
        const Vec close{1e-7, 0.0, 0.0};
        CHECK_THROWS_AS(gradient(u, close, DiffScheme::fd_scheme()), std::domain_error);
    }
}

TEST_CASE("extrapolation ladder") {
    ExtrapolationLadder ladder;
    SECTION("constant and pure-decay samples") {
        std::vector<std::pair<double, double>> flat, decay, model;
        for (int k = 0; k < 5; ++k) {
            const double r = std::pow(2.0, k) * 5.0;
            flat.emplace_back(r, 7.25);
            decay.emplace_back(r, 1.0 / r);
            model.emplace_back(r, 2.0 + 5.0 / r);
        }
        CHECK(extrapolate_limit(flat, ladder).value == Catch::Approx(7.25).margin(1e-12));
        CHECK(std::abs(extrapolate_limit(decay, ladder).value) < 1e-12);
        const auto est = extrapolate_limit(model, ladder);
        CHECK(std::abs(est.value - 2.0) < 1e-10);
    }
    SECTION("higher-order terms are removed stage by stage") {
        auto sample = [](double r) { return 3.0 + 4.0 / r + 9.0 / (r * r); };
        std::vector<std::pair<double, double>> samples;
        for (int k = 0; k < 6; ++k) {
            const double r = std::pow(2.0, k) * 4.0;
            samples.emplace_back(r, sample(r));
        }
        ExtrapolationLadder one{1.0, 1};
        ExtrapolationLadder two{1.0, 2};
        const double e1 = std::abs(extrapolate_limit(samples, one).value - 3.0);
        const double e2 = std::abs(extrapolate_limit(samples, two).value - 3.0);
        CHECK(e2 < e1);
        CHECK(e2 < 1e-10); // two-term model is eliminated exactly on a geometric ladder
    }
    SECTION("abscissa validation") {
        CHECK_THROWS_AS(extrapolate_limit({{1.0, 1.0}}, ladder), std::invalid_argument);
        CHECK_THROWS_AS(extrapolate_limit({{2.0, 1.0}, {1.0, 1.0}}, ladder), std::invalid_argument);
    }
    SECTION("limit toward zero abscissa, linear then quadratic data") {
        std::vector<std::pair<double, double>> lin, quad;
        for (int k = 0; k < 6; ++k) {
            const double h = 0.4 / std::pow(2.0, k);
            lin.emplace_back(h, -1.0 + 0.3 * h);
            quad.emplace_back(h, -1.0 + 0.3 * h * h);
        }
        CHECK(std::abs(extrapolate_at_zero(lin, ladder).value + 1.0) < 1e-12);
        ExtrapolationLadder l3{1.0, 3};
        CHECK(std::abs(extrapolate_at_zero(quad, l3).value + 1.0) < 1e-10);
    }
}

TEST_CASE("pairwise summation is order-stable and accurate") {
    std::vector<double> data(100000);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    long double exact = 0.0;
    for (auto& v : data) {
        v = d(rng);
        exact += v;
    }
    const double s1 = pairwise_sum(data);
    const double s2 = pairwise_sum(data);
    CHECK(s1 == s2);
    CHECK(std::abs(s1 - static_cast<double>(exact)) < 1e-10);
}
