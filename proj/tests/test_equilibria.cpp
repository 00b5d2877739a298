#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "tumordelay/equilibria.hpp"
#include "tumordelay/error.hpp"

using namespace tumordelay;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

ModelParams eq42(Angiogenesis alpha = Angiogenesis::finite(0.2)) {
    ModelParams p;
    p.gamma = 1.0;
    p.mu = 1.0;
    p.sigma_tilde = 2.0;
    p.sigma_inf = 3.3;
    p.alpha = alpha;
    return p;
}

Big big_l(const Big& y, const ModelParams& p) {
    const Big g = cosh(y) / sinh(y) - 1 / y;
    const Big pp = g / y;
    if (p.alpha.is_dirichlet()) return pp;
    const Big a = p.alpha.rate();
    return a * pp / (a + sqrt(Big(p.gamma)) * g);
}

// Independent stationary oracle: 50-digit bisection of l(y) = Lambda.
double oracle_omega_s(const ModelParams& p) {
    const Big lambda = Big(p.sigma_tilde) / (3 * Big(p.sigma_inf));
    Big lo = 1e-6;
    Big hi = 1;
    while (big_l(hi, p) > lambda) hi *= 2;
    for (int i = 0; i < 200 && hi - lo > Big(1e-30); ++i) {
        const Big mid = (lo + hi) / 2;
        (big_l(mid, p) > lambda ? lo : hi) = mid;
    }
    const Big y = (lo + hi) / 2;
    return static_cast<double>(y * y * y);
}

std::vector<ModelParams> random_valid_params(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ModelParams> out;
    for (int i = 0; i < n; ++i) {
        ModelParams p;
        p.gamma = 0.2 + 4.8 * u(rng);
        p.mu = 0.2 + 2.8 * u(rng);
        p.sigma_tilde = 0.5 + 2.5 * u(rng);
        p.sigma_inf = p.sigma_tilde * (1.05 + 2.0 * u(rng));
        p.alpha = (i % 7 == 6) ? Angiogenesis::dirichlet()
                               : Angiogenesis::finite(std::pow(10.0, -1.3 + 4.3 * u(rng)));
        out.push_back(p);
    }
    return out;
}

const std::vector<Angiogenesis> kGridAlphas = [] {
    std::vector<Angiogenesis> v{Angiogenesis::finite(0.2)};
    for (int a = 1; a <= 10; ++a) v.push_back(Angiogenesis::finite(a));
    for (int a = 20; a <= 100; a += 10) v.push_back(Angiogenesis::finite(a));
    v.push_back(Angiogenesis::finite(1000));
    v.push_back(Angiogenesis::dirichlet());
    return v;
}();

}  // namespace

TEST_CASE("no positive equilibrium when sigma_inf <= sigma_tilde") {
    ModelParams p = eq42();
    p.sigma_inf = 2.0;
    CHECK_FALSE(find_positive_stationary(p).has_value());
    p.sigma_inf = 1.0;
    CHECK_FALSE(find_positive_stationary(p).has_value());
    p = eq42(Angiogenesis::finite(0.0));
    CHECK_FALSE(find_positive_stationary(p).has_value());
}

TEST_CASE("stationary state matches the high-precision bisection oracle") {
    for (const auto& a : kGridAlphas) {
        const ModelParams p = eq42(a);
        const auto s = find_positive_stationary(p);
        REQUIRE(s.has_value());
        CHECK(s->omega_s == doctest::Approx(oracle_omega_s(p)).epsilon(1e-12));
        CHECK(s->residual <= kStationaryResidualTol);
        CHECK(s->radius_s * std::sqrt(p.gamma) == doctest::Approx(std::cbrt(s->omega_s)));
    }
    const auto s = find_positive_stationary(eq42());
    CHECK(s->omega_s == doctest::Approx(0.05667740388).epsilon(1e-9));
}

TEST_CASE("stationary state on random parameter sets") {
    for (const ModelParams& p : random_valid_params(50, 7)) {
        const auto s = find_positive_stationary(p);
        REQUIRE(s.has_value());
        CHECK(s->omega_s > 0.0);
        CHECK(s->residual <= kStationaryResidualTol);
        CHECK(s->omega_s == doctest::Approx(oracle_omega_s(p)).epsilon(1e-10));
        CHECK(s->radius_s * std::sqrt(p.gamma) ==
              doctest::Approx(std::cbrt(s->omega_s)).epsilon(1e-15));
    }
}

TEST_CASE("bisection result does not depend on the starting bracket") {
    const ModelParams p = eq42();
    const double y_ref = std::cbrt(find_positive_stationary(p)->omega_s);
    for (auto [lo, hi] : {std::pair{1e-8, 1.0}, {0.1, 0.5}, {1e-3, 64.0}, {0.3, 0.4}}) {
        const double y = solve_stationary_cube_root(p, lo, hi);
        CHECK(std::abs(y * y * y - y_ref * y_ref * y_ref) <= 1e-10);
    }
    CHECK_THROWS_AS((void)solve_stationary_cube_root(p, 0.5, 1.0), Error);
}

TEST_CASE("linearize_positive coefficients") {
    const ModelParams p = eq42();
    const auto s = find_positive_stationary(p);
    const LinearCoeffs c = linearize_positive(p, *s);
    CHECK(c.about == Equilibrium::Positive);
    CHECK(std::abs(c.b2 - 2.0) <= 1e-12);
    CHECK(c.b1 == doctest::Approx(-1.733449041).epsilon(1e-9));
    CHECK(tau1_admissible_bound(c) == doctest::Approx(1.574615921).epsilon(1e-9));
    CHECK(linearize_trivial(p).b2 == c.b2);
}

TEST_CASE("b1 < 0 and |b1| < b2 on 50 random sets, cross-checked by H'(y) finite differences") {
    for (const ModelParams& p : random_valid_params(50, 11)) {
        const auto s = find_positive_stationary(p);
        const LinearCoeffs c = linearize_positive(p, *s);
        CHECK(c.b1 < 0.0);
        CHECK(std::abs(c.b1) < c.b2);

        // b1 = -(a/3) H'(y) / y^2 with H(y) = y^3 l(y).
        const DerivedParams d = derive_params(p);
        const double y = std::cbrt(s->omega_s);
        auto H = [&](double v) { return v * v * v * eval_l(v, p); };
        const double h = 1e-5 * y;
        const double dH = (H(y + h) - H(y - h)) / (2 * h);
        CHECK(dH > 0.0);
        CHECK(c.b1 == doctest::Approx(-(d.a / 3.0) * dH / (y * y)).epsilon(1e-6));
    }
}

TEST_CASE("linearize_positive rejects a state from other parameters") {
    const auto s = find_positive_stationary(eq42());
    try {
        (void)linearize_positive(eq42(Angiogenesis::finite(5.0)), *s);
        FAIL("accepted inconsistent state");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentState);
    }
}

TEST_CASE("linearize_trivial") {
    const LinearCoeffs c = linearize_trivial(eq42());
    CHECK(c.about == Equilibrium::Trivial);
    CHECK(c.b1 == doctest::Approx(-3.3));
    CHECK(c.b2 == doctest::Approx(2.0));

    ModelParams p = eq42();
    p.mu = 2.0;
    p.sigma_inf = 1.0;
    p.sigma_tilde = 3.0;
    const LinearCoeffs q = linearize_trivial(p);
    CHECK(q.b1 == doctest::Approx(-2.0));
    CHECK(q.b2 == doctest::Approx(6.0));

    p.sigma_tilde = p.sigma_inf;
    const LinearCoeffs e = linearize_trivial(p);
    CHECK(std::abs(e.b1) == doctest::Approx(e.b2));
}

TEST_CASE("classify_trivial regimes and the flip across sigma_tilde") {
    ModelParams p = eq42();
    CHECK(classify_trivial(p).kind == TrivialRegimeKind::UnstableNoHopf);
    CHECK_FALSE(classify_trivial(p).tau1_bound.has_value());

    p.sigma_inf = 2.0;
    p.sigma_tilde = 3.3;
    const TrivialRegime r = classify_trivial(p);
    CHECK(r.kind == TrivialRegimeKind::StableWithHopfThreshold);
    CHECK(*r.tau1_bound == doctest::Approx(std::numbers::pi / (2.0 * std::sqrt(3.3 * 3.3 - 4.0))));

    p.sigma_tilde = 2.0;
    CHECK(classify_trivial(p).kind == TrivialRegimeKind::Degenerate);
    p.sigma_inf = 2.0 + 1e-9;
    CHECK(classify_trivial(p).kind == TrivialRegimeKind::UnstableNoHopf);
    p.sigma_inf = 2.0 - 1e-9;
    CHECK(classify_trivial(p).kind == TrivialRegimeKind::StableWithHopfThreshold);
}

TEST_CASE("tau1_admissible_bound") {
    CHECK(tau1_admissible_bound({0.0, 1.0, Equilibrium::Trivial}) ==
          doctest::Approx(std::numbers::pi / 2));
    CHECK(tau1_admissible_bound({-3.0, 5.0, Equilibrium::Trivial}) ==
          doctest::Approx(std::numbers::pi / 8));
    for (LinearCoeffs c : {LinearCoeffs{-2.0, 2.0, Equilibrium::Trivial},
                           LinearCoeffs{-3.3, 2.0, Equilibrium::Trivial}}) {
        try {
            (void)tau1_admissible_bound(c);
            FAIL("accepted |b1| >= b2");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::CoefficientOrderViolated);
        }
    }
}
