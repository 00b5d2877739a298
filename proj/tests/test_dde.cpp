#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tumordelay/dde.hpp"
#include "tumordelay/equilibria.hpp"
#include "tumordelay/error.hpp"

using namespace tumordelay;

namespace {

ModelParams eq42() {
    ModelParams p;
    p.alpha = Angiogenesis::finite(0.2);
    return p;
}

double omega_s() { return find_positive_stationary(eq42())->omega_s; }

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("DelayPair accessors") {
    const DelayPair d{0.3, 1.2};
    CHECK(d.max_delay() == 1.2);
    CHECK(d.min_delay() == 0.3);
    CHECK(d.min_positive_delay() == 0.3);
    CHECK(DelayPair{0.0, 0.7}.min_positive_delay() == 0.7);
    CHECK(DelayPair{0.0, 0.0}.min_positive_delay() == 0.0);
}

TEST_CASE("equilibrium history stays at omega_s") {
    const double ws = omega_s();
    SUBCASE("over [0, 100]") {
        const Trajectory t = integrate(eq42(), {0.5, 0.8}, HistoryFunction::constant(ws), 100.0);
        CHECK(t.status() == TrajectoryStatus::Completed);
        for (const auto& n : t.nodes()) REQUIRE(std::abs(n.omega - ws) <= 1e-10);
    }
    SUBCASE("for 1e4 steps") {
        const DelayPair d{0.04, 0.0394};
        const double h = d.min_delay() / 64;
        const Trajectory t = integrate(eq42(), d, HistoryFunction::constant(ws), 1e4 * h);
        CHECK(t.nodes().size() >= 10001);
        for (const auto& n : t.nodes()) REQUIRE(std::abs(n.omega - ws) <= 1e-9 * ws);
    }
}

TEST_CASE("self-convergence against a fine reference at t = 10") {
    const DelayPair d{1.0, 1.0};
    const auto hist = HistoryFunction::constant(0.01);
    const double ref = integrate(eq42(), d, hist, 10.0, 1024).omega(10.0);
    const double got = integrate(eq42(), d, hist, 10.0, 64).omega(10.0);
    CHECK(std::abs(got - ref) <= 1e-6 * std::abs(ref));

    // Errors shrink monotonically with the step.
    double prev = INFINITY;
    for (int steps : {8, 16, 32}) {
        const double err = std::abs(integrate(eq42(), d, hist, 10.0, steps).omega(10.0) - ref);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("observed convergence order on smooth probes") {
    SUBCASE("commensurate delays") {
        const auto order =
            convergence_order(eq42(), {0.5, 1.0}, HistoryFunction::constant(0.03), 5.0);
        REQUIRE(order.has_value());
        CHECK(*order >= 3.5);
    }
    SUBCASE("equal delays, small history") {
        const auto order =
            convergence_order(eq42(), {2.0, 2.0}, HistoryFunction::constant(0.01), 8.0);
        REQUIRE(order.has_value());
        CHECK(*order >= 3.5);
    }
    SUBCASE("equilibrium history has no measurable error") {
        CHECK_FALSE(
            convergence_order(eq42(), {0.5, 1.0}, HistoryFunction::constant(omega_s()), 5.0)
                .has_value());
    }
}

TEST_CASE("determinism: identical inputs give bit-identical trajectories") {
    const auto hist = HistoryFunction::constant(0.01);
    const Trajectory a = integrate(eq42(), {0.04, 0.5374}, hist, 50.0);
    const Trajectory b = integrate(eq42(), {0.04, 0.5374}, hist, 50.0);
    REQUIRE(a.nodes().size() == b.nodes().size());
    CHECK(std::memcmp(a.nodes().data(), b.nodes().data(),
                      a.nodes().size() * sizeof(TrajectoryNode)) == 0);
}

TEST_CASE("node grid and dense output") {
    const Trajectory t = integrate(eq42(), {0.5, 0.25}, HistoryFunction::constant(0.02), 3.1, 16);
    const auto& n = t.nodes();
    CHECK(t.step() == doctest::Approx(0.25 / 16));
    CHECK(n.front().t == 0.0);
    CHECK(n.back().t == 3.1);
    for (std::size_t i = 1; i < n.size(); ++i) REQUIRE(n[i].t > n[i - 1].t);
    for (std::size_t i = 0; i < n.size(); i += 7) {
        CHECK(t.omega(n[i].t) == n[i].omega);
        CHECK(sample(t, n[i].t).omega == n[i].omega);
    }
    // Dense values between nodes stay between the neighbours for this slow solution.
    for (std::size_t i = 0; i + 1 < n.size(); i += 5) {
        const double mid = t.omega(0.5 * (n[i].t + n[i + 1].t));
        CHECK(mid >= std::min(n[i].omega, n[i + 1].omega) - 1e-12);
        CHECK(mid <= std::max(n[i].omega, n[i + 1].omega) + 1e-12);
    }
    CHECK(code_of([&] { (void)t.omega(-0.1); }) == ErrorCode::TimeOutOfRange);
    CHECK(code_of([&] { (void)sample(t, 3.2); }) == ErrorCode::TimeOutOfRange);
}

TEST_CASE("radius accessor") {
    const Trajectory t = integrate(eq42(), {0.5, 0.5}, HistoryFunction::constant(0.02), 2.0);
    CHECK(sample(t, 1.0).radius == doctest::Approx(std::cbrt(t.omega(1.0))));

    ModelParams p = eq42();
    p.gamma = 4.0;
    const Trajectory q = integrate(p, {0.5, 0.5}, HistoryFunction::constant(8.0), 1e-3);
    CHECK(q.radius(0.0) == doctest::Approx(1.0));
}

TEST_CASE("converges to omega_s for a small apoptosis delay") {
    const double ws = omega_s();
    const Trajectory t =
        integrate(eq42(), {0.03936539802, 0.0394}, HistoryFunction::constant(0.01), 400.0);
    CHECK(t.status() == TrajectoryStatus::Completed);
    for (double s = 300.0; s <= 400.0; s += 0.5) REQUIRE(std::abs(t.omega(s) - ws) <= 1e-4);
}

TEST_CASE("positivity loss above the threshold") {
    const Trajectory t =
        integrate(eq42(), {0.03936539802, 0.5614}, HistoryFunction::constant(0.01), 400.0);
    CHECK(t.status() == TrajectoryStatus::PositivityLoss);
    REQUIRE(t.t_fail().has_value());
    CHECK(*t.t_fail() > t.nodes().back().t);
    CHECK(*t.t_fail() < 50.0);
    for (const auto& n : t.nodes()) REQUIRE(n.omega > 0.0);
}

TEST_CASE("completed trajectories are positive on a dense grid") {
    const Trajectory t =
        integrate(eq42(), {0.03936539802, 0.5554}, HistoryFunction::constant(0.01), 100.0);
    REQUIRE(t.status() == TrajectoryStatus::Completed);
    const std::size_t m = 10 * t.nodes().size();
    for (std::size_t k = 0; k <= m; ++k) REQUIRE(t.omega(100.0 * k / m) > 0.0);
}

TEST_CASE("zero delays") {
    // Both zero: logistic-type ODE towards omega_s.
    const Trajectory ode = integrate(eq42(), {0.0, 0.0}, HistoryFunction::constant(0.01), 50.0);
    CHECK(ode.step() == doctest::Approx(0.05));
    CHECK(ode.omega(50.0) == doctest::Approx(omega_s()).epsilon(1e-6));
    // One zero delay uses the smallest positive one for the step.
    const Trajectory one = integrate(eq42(), {0.0, 0.2}, HistoryFunction::constant(0.01), 1.0, 8);
    CHECK(one.step() == doctest::Approx(0.025));
}

TEST_CASE("history representations") {
    const double tau = 1.0;
    const auto sampled = HistoryFunction::sampled({{-1.0, 0.02}, {-0.5, 0.03}, {0.0, 0.04}});
    CHECK(sampled(-0.75) == doctest::Approx(0.025));
    CHECK(sampled(0.0) == doctest::Approx(0.04));
    CHECK_NOTHROW(sampled.validate(tau));

    const auto radius = HistoryFunction::from_radius([](double) { return 0.5; }, 4.0);
    CHECK(radius(-0.3) == doctest::Approx(1.0));

    const auto formula = HistoryFunction::formula([](double t) { return 0.02 + 0.01 * t; });
    CHECK(formula(-1.0) == doctest::Approx(0.01));
    CHECK_NOTHROW(formula.validate(tau));

    // Sampled and equivalent formula histories give the same trajectory to interpolation error.
    const auto lin = HistoryFunction::sampled({{-1.0, 0.01}, {0.0, 0.02}});
    const double a = integrate(eq42(), {1.0, 0.5}, lin, 5.0).omega(5.0);
    const double b = integrate(eq42(), {1.0, 0.5}, formula, 5.0).omega(5.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("history validation errors") {
    const DelayPair d{1.0, 0.5};
    auto run = [&](const HistoryFunction& h) {
        return code_of([&] { (void)integrate(eq42(), d, h, 2.0); });
    };
    CHECK(run(HistoryFunction::constant(0.0)) == ErrorCode::NonPositiveHistory);
    CHECK(run(HistoryFunction::constant(-1.0)) == ErrorCode::NonPositiveHistory);
    CHECK(run(HistoryFunction::sampled({{-0.5, 0.1}, {0.0, 0.1}})) ==
          ErrorCode::HistoryDomainViolation);
    CHECK(run(HistoryFunction::sampled({{-1.0, 0.1}, {-0.2, 0.1}})) ==
          ErrorCode::HistoryDomainViolation);
    CHECK(run(HistoryFunction::sampled({{-1.0, 0.1}, {-1.0, 0.1}, {0.0, 0.1}})) ==
          ErrorCode::HistoryDomainViolation);
    CHECK(run(HistoryFunction::sampled({{-1.0, 0.1}, {0.0, -0.1}})) ==
          ErrorCode::NonPositiveHistory);
    CHECK(run(HistoryFunction::formula([](double t) { return t + 0.5; })) ==
          ErrorCode::NonPositiveHistory);
    CHECK(run(HistoryFunction::formula(nullptr)) == ErrorCode::HistoryDomainViolation);
}

TEST_CASE("argument errors") {
    const auto h = HistoryFunction::constant(0.01);
    CHECK(code_of([&] { (void)integrate(eq42(), {1, 1}, h, 1.0, 3); }) ==
          ErrorCode::InvalidStepCount);
    CHECK(code_of([&] { (void)integrate(eq42(), {1, 1}, h, 0.0); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { (void)integrate(eq42(), {-1, 1}, h, 1.0); }) ==
          ErrorCode::InvalidArgument);
    ModelParams bad = eq42();
    bad.mu = -1;
    CHECK(code_of([&] { (void)integrate(bad, {1, 1}, h, 1.0); }) == ErrorCode::InvalidParams);
    CHECK(code_of([] {
              Trajectory t({}, 0.1, 1.0, {1, 1}, TrajectoryStatus::Completed, std::nullopt);
          }) == ErrorCode::EmptyTrajectory);
}

TEST_CASE("trajectory CSV export") {
    const Trajectory t = integrate(eq42(), {0.5, 0.5}, HistoryFunction::constant(0.02), 1.0, 4);
    std::ostringstream out;
    t.write_csv(out);
    const std::string csv = out.str();
    CHECK(csv.rfind("t,omega,radius\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        double tt, w, r;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &tt, &w, &r) == 3);
        CHECK(w == t.nodes()[rows].omega);  // 17 digits round-trip exactly
        CHECK(tt == t.nodes()[rows].t);
        ++rows;
    }
    CHECK(rows == t.nodes().size());
}
