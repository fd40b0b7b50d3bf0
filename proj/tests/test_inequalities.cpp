#include <doctest.h>

#include "tricausal/errors.hpp"
#include "tricausal/inequality_io.hpp"
#include "tricausal/inflation.hpp"

#include <cmath>

using namespace tricausal;

namespace {

const char* kHigh[] = {"000", "110", "021", "131", "202", "312", "233", "323"};
const char* kLow[] = {"010", "100", "031", "121", "212", "302", "223", "333"};

std::uint64_t index_of(const char* abc) { return 16 * (abc[0] - '0') + 4 * (abc[1] - '0') + (abc[2] - '0'); }

// Dense-grid oracle: first eps on a 1e-4 grid where the value is no longer negative.
double grid_crossing(const PolynomialInequality& ineq, const NoisyFamily& f) {
    for (int i = 0; i <= 10000; ++i) {
        const double eps = i * 1e-4;
        if (evaluate(ineq, noisy_member(f, eps)) >= 0) return eps;
    }
    return 2.0;
}

}  // namespace

TEST_CASE("Fritz distribution entries") {
    const auto fr = fritz_distribution();
    const QSqrt2 high(Rational(1, 16), Rational(1, 32)), low(Rational(1, 16), Rational(-1, 32));
    QSqrt2 total(0);
    int support = 0;
    for (auto e : kHigh) CHECK(fr.at(index_of(e)) == high);
    for (auto e : kLow) CHECK(fr.at(index_of(e)) == low);
    for (const auto& p : fr.probs()) {
        total = total + p;
        support += p.sign() > 0;
    }
    CHECK(total == QSqrt2(1));
    CHECK(support == 16);
    CHECK(high.str() == "(2+sqrt2)/32");
}

TEST_CASE("wagon-wheel and CHSH values on the Fritz distribution") {
    const auto fr = fritz_distribution();
    CHECK(evaluate(wagon_wheel_inequality(), fr) == QSqrt2(Rational(-1, 16)));
    CHECK(chsh_triangle(fr) == QSqrt2(0, 2));
    CHECK(std::abs(chsh_triangle(fr.to_double()) - 2 * std::sqrt(2.0)) <= 1e-12);
    CHECK(c_tracks_left_bits(fr.to_double()));
    CHECK_FALSE(c_tracks_left_bits(uniform_abc().to_double()));
}

TEST_CASE("the published wagon-wheel form is violated by classical models") {
    // A = 2 and B = 2 deterministically, C uniform on {1, 2}: a product
    // distribution, hence classical, yet the published sum is 5/4 > 0.
    std::vector<QSqrt2> probs(64, QSqrt2(0));
    probs[index_of("221")] = QSqrt2(Rational(1, 2));
    probs[index_of("222")] = QSqrt2(Rational(1, 2));
    const ExactDistribution p(fritz_distribution().space(), probs);
    CHECK(evaluate(wagon_wheel_inequality(), p) == QSqrt2(Rational(-5, 4)));
    CHECK(evaluate(wagon_wheel_inequality(), uniform_abc()) == QSqrt2(Rational(-19, 64)));
}

TEST_CASE("canonical form merges, sorts and drops zero terms") {
    const Factor f{{"A"}, {1}}, g{{"B"}, {0}};
    PolynomialInequality p({{Rational(2), {f, g}}, {Rational(-2), {g, f}}, {Rational(1), {g}}});
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms()[0].coefficient == 1);
    CHECK(PolynomialInequality().is_zero());
    CHECK(p.negated().terms()[0].coefficient == -1);
    CHECK(p.degree() == 1);
}

TEST_CASE("relabeling moves bit variables with their parents") {
    const auto ww = wagon_wheel_inequality();
    const auto swapped = ww.relabeled({{"A", "B"}, {"B", "A"}});
    CHECK_FALSE(swapped == ww);
    CHECK(swapped.relabeled({{"A", "B"}, {"B", "A"}}) == ww);
    CHECK(swapped.variables().count(NodeId("B_r")) == 1);
}

TEST_CASE("inequality text round trip") {
    const auto ww = wagon_wheel_inequality();
    CHECK(parse_inequality(format_inequality(ww)) == ww);
    CHECK(parse_inequality(format_inequality(PolynomialInequality())).is_zero());
    CHECK_THROWS_AS(parse_inequality("+1 * P[A](x)"), InputError);
    CHECK(format_rational(Rational(-3, 4)) == "-3/4");
}

TEST_CASE("noise threshold brackets the dense grid crossing") {
    const auto verdict = test_compatibility(fritz_distribution().to_double(), builtin_inflation("wagon-wheel"));
    REQUIRE(std::holds_alternative<Witnessed>(verdict));
    const auto& ineq = std::get<Witnessed>(verdict).inequality;
    const auto family = fritz_noisy_family();
    const auto t = noise_threshold(ineq, family);
    CHECK(t.epsilon > 0);
    CHECK(t.upper - t.lower <= 1e-6);
    CHECK_FALSE(t.violated_at_one);
    const double g = grid_crossing(ineq, family);
    CHECK(t.epsilon <= g + 1e-6);
    CHECK(t.epsilon >= g - 1e-4 - 1e-6);
}

TEST_CASE("noise threshold preconditions") {
    CHECK_THROWS_AS(noise_threshold(PolynomialInequality(), fritz_noisy_family()), InputError);
    const auto t = noise_threshold(wagon_wheel_inequality(), fritz_noisy_family());
    CHECK(t.violated_at_one);
    CHECK(noisy_member(fritz_noisy_family(), Rational(1)).probs() == uniform_abc().probs());
}
