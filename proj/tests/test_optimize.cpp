#include <doctest.h>

#include "tricausal/errors.hpp"
#include "tricausal/optimize.hpp"

#include <cmath>
#include <numbers>

using namespace tricausal;

namespace {

double bowl(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
}

double rosenbrock(const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
}

// Two wells; the deeper one sits near x = -1.26, the shallower near 1.13.
double tilted_well(const std::vector<double>& x) {
    const double v = x[0];
    return v * v * v * v - 3 * v * v + 0.5 * v;
}

bool nonincreasing(const std::vector<double>& t) {
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] > t[i - 1]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("Nelder-Mead minimizes a bowl and Rosenbrock") {
    const auto b = nelder_mead(bowl, {0.3, -0.7, 1.1, 0.5, -0.2});
    CHECK(b.f < 1e-8);
    CHECK(b.status == OptStatus::Converged);
    CHECK(nonincreasing(b.trace));
    const auto r = nelder_mead(rosenbrock, {-1.2, 1});
    CHECK(r.f < 1e-8);
    CHECK(r.x[0] == doctest::Approx(1).epsilon(1e-3));
    CHECK(r.x[1] == doctest::Approx(1).epsilon(1e-3));
}

TEST_CASE("BFGS recovers the minimizer of a shifted quadratic") {
    const std::vector<double> c{1.5, -2.0, 0.25};
    auto q = [&](const std::vector<double>& x) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - c[i]) * (x[i] - c[i]);
        return s;
    };
    const auto r = bfgs_fd(q, {0, 0, 0});
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(r.x[i] == doctest::Approx(c[i]).epsilon(1e-6));
    const auto ro = bfgs_fd(rosenbrock, {-1.2, 1});
    CHECK(ro.f < 1e-10);
    CHECK(nonincreasing(ro.trace));
}

TEST_CASE("central differences match an analytic gradient") {
    auto cubic = [](const std::vector<double>& x) { return x[0] * x[0] * x[0] + 2 * x[0] * x[1] - x[1] * x[1] * x[1]; };
    const std::vector<double> x{0.7, -1.3};
    const std::vector<double> want{3 * x[0] * x[0] + 2 * x[1], 2 * x[0] - 3 * x[1] * x[1]};
    for (unsigned workers : {1u, 3u}) {
        const auto g = fd_gradient(cubic, x, 1e-6, workers);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(g[i] - want[i]) <= 1e-5);
    }
}

TEST_CASE("budgets are respected") {
    LocalOptions o;
    o.max_evaluations = 40;
    const auto r = nelder_mead(rosenbrock, {-1.2, 1}, o);
    CHECK(r.status == OptStatus::BudgetExhausted);
    CHECK(r.evaluations <= 40);
    const auto b = bfgs_fd(rosenbrock, {-1.2, 1}, o);
    CHECK(b.evaluations <= 40);
}

TEST_CASE("basin hopping leaves the shallow well") {
    BasinHoppingOptions o;
    o.step = 1.0;
    const auto local = nelder_mead(tilted_well, {1.1});
    CHECK(local.x[0] > 0);
    const auto r = basin_hopping(tilted_well, {1.1}, o);
    CHECK(r.x[0] == doctest::Approx(-1.264).epsilon(1e-2));
    CHECK(r.f < local.f);
    CHECK(nonincreasing(r.trace));
}

TEST_CASE("basin hopping with zero step is one local run") {
    BasinHoppingOptions o;
    o.step = 0;
    const auto r = basin_hopping(tilted_well, {1.1}, o);
    const auto local = nelder_mead(tilted_well, {1.1}, o.local_options);
    CHECK(r.f == local.f);
    CHECK(r.x == local.x);
}

TEST_CASE("basin hopping is deterministic for a fixed seed") {
    BasinHoppingOptions o;
    o.step = 1.0;
    o.hops = 10;
    o.seed = 42;
    const auto a = basin_hopping(tilted_well, {1.1}, o);
    const auto b = basin_hopping(tilted_well, {1.1}, o);
    CHECK(a.x == b.x);
    CHECK(a.f == b.f);
    CHECK(a.trace == b.trace);
}

TEST_CASE("violation search never ends below the seed") {
    ViolationOptions o;
    o.optimizer = OptimizerKind::NelderMead;
    o.basin.local_options.max_evaluations = 300;
    const auto r = maximize_violation(wagon_wheel_inequality(), fritz_strategy_params(), o);
    CHECK(r.seed_violation == doctest::Approx(1.0 / 16).epsilon(1e-9));
    CHECK(r.violation >= r.seed_violation - 1e-12);
    for (std::size_t i = 1; i < r.violation_trace.size(); ++i) CHECK(r.violation_trace[i] >= r.violation_trace[i - 1]);
}

TEST_CASE("zero budget returns the seed") {
    ViolationOptions o;
    o.basin.local_options.max_evaluations = 0;
    const auto r = maximize_violation(wagon_wheel_inequality(), fritz_strategy_params(), o);
    CHECK(r.evaluations == 1);
    CHECK(r.params == wrap_strategy_params(fritz_strategy_params()));
    CHECK(r.violation == doctest::Approx(1.0 / 16).epsilon(1e-9));
    CHECK(r.matches_fritz_support);
    CHECK(r.support_match_stable);
}

TEST_CASE("the zero inequality is never violated") {
    ViolationOptions o;
    o.optimizer = OptimizerKind::NelderMead;
    o.basin.local_options.max_evaluations = 200;
    std::mt19937_64 rng(5);
    const auto r = maximize_violation(PolynomialInequality(), random_strategy_params(rng), o);
    CHECK(r.violation == 0.0);
    CHECK(r.seed_violation == 0.0);
}

TEST_CASE("random parameters lie in range and wrapping is idempotent") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        const auto x = random_strategy_params(rng);
        REQUIRE(x.size() == kStrategyParams);
        CHECK(wrap_strategy_params(x) == x);
        CHECK_NOTHROW(strategy_from_params(x).validate());
    }
    std::vector<double> big(kStrategyParams, 17.3);
    const auto w = wrap_strategy_params(big);
    CHECK(wrap_strategy_params(w) == w);
    CHECK_NOTHROW(strategy_from_params(w));
    CHECK_THROWS_AS(maximize_violation(wagon_wheel_inequality(), {1.0, 2.0}), InputError);
}

TEST_CASE("support patterns") {
    const auto p = fritz_distribution().to_double();
    const auto s = support_pattern(p, 1e-6);
    CHECK(std::count(s.begin(), s.end(), true) == 16);
}
