#include <doctest.h>

#include "tricausal/distribution_io.hpp"
#include "tricausal/errors.hpp"
#include "tricausal/inequality.hpp"
#include "tricausal/marginal.hpp"

#include <random>

using namespace tricausal;

namespace {

std::map<NodeId, int> binary(std::initializer_list<const char*> names) {
    std::map<NodeId, int> out;
    for (auto n : names) out[NodeId(n)] = 2;
    return out;
}

}  // namespace

TEST_CASE("incidence matrix of the three-pair binary scenario") {
    MarginalScenario sc({{"A", "B"}, {"B", "C"}, {"A", "C"}}, binary({"A", "B", "C"}));
    const auto m = incidence_matrix(sc);
    // Rows (A,B), (B,C), (A,C) in lexicographic outcome order; columns ABC = 000..111.
    const int expected[12][8] = {
        {1, 1, 0, 0, 0, 0, 0, 0}, {0, 0, 1, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1, 0, 0}, {0, 0, 0, 0, 0, 0, 1, 1},
        {1, 0, 0, 0, 1, 0, 0, 0}, {0, 1, 0, 0, 0, 1, 0, 0}, {0, 0, 1, 0, 0, 0, 1, 0}, {0, 0, 0, 1, 0, 0, 0, 1},
        {1, 0, 1, 0, 0, 0, 0, 0}, {0, 1, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 1, 0}, {0, 0, 0, 0, 0, 1, 0, 1}};
    REQUIRE(m.rows == 12);
    REQUIRE(m.cols == 8);
    for (int r = 0; r < 12; ++r) {
        for (int c = 0; c < 8; ++c) CHECK(m.at(r, c) == expected[r][c]);
    }
    CHECK(m.nonzeros() == 3 * 8);
    CHECK(sc.row_label(5) == "P[B,C](0,1)");
}

TEST_CASE("event space encoding is mixed radix with the first variable most significant") {
    EventSpace s({"B", "A"}, {3, 2});
    CHECK(s.variables() == std::vector<NodeId>{"A", "B"});
    const int outcome[] = {1, 2};
    CHECK(s.encode(outcome) == 5);
    CHECK(s.decode(5) == std::vector<int>{1, 2});
    CHECK(s.event_count() == 6);
    CHECK_THROWS_AS(EventSpace({"A", "A"}, {2, 2}), InputError);
}

TEST_CASE("scenarios drop contained and duplicate contexts") {
    MarginalScenario sc({{"A", "B"}, {"A"}, {"B", "A"}, {"B", "C"}}, binary({"A", "B", "C"}));
    CHECK(sc.contexts().size() == 2);
    CHECK(sc.row_count() == 8);
}

TEST_CASE("marginal vector equals M times the joint vector") {
    std::mt19937_64 rng(3);
    std::map<NodeId, int> cards{{"A", 2}, {"B", 3}, {"C", 2}, {"D", 2}};
    MarginalScenario sc({{"A", "B"}, {"B", "C", "D"}, {"A", "D"}}, cards);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> joint(sc.joint().event_count());
    double total = 0;
    for (auto& x : joint) total += x = u(rng);
    for (auto& x : joint) x /= total;
    const Distribution p(sc.joint(), joint);
    const auto v = marginal_vector(MarginalModel::from_joint(sc, p), sc);
    const auto mv = incidence_matrix(sc).multiply(joint);
    REQUIRE(v.size() == mv.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(mv[i]).epsilon(1e-14));
    // Direct marginalization as an independent check of one row.
    const auto pad = marginalize(p, NodeSet{"A", "D"});
    CHECK(v[sc.row_offset(2) + 3] == doctest::Approx(pad.at(3)).epsilon(1e-14));
}

TEST_CASE("streamed layout reproduces the stored incidence") {
    std::map<NodeId, int> cards{{"A", 3}, {"B", 2}, {"C", 2}};
    MarginalScenario sc({{"A", "B"}, {"B", "C"}, {"A", "C"}}, cards);
    const auto m = incidence_matrix(sc);
    IncidenceLayout layout(sc);
    std::vector<std::uint32_t> rows(layout.context_count());
    for (std::uint64_t j = 0; j < m.cols; ++j) {
        layout.rows_of(j, rows.data());
        for (auto r : rows) CHECK(m.at(r, j) == 1);
    }
}

TEST_CASE("bit coarse graining and exact distributions") {
    const auto fr = fritz_distribution();
    const auto bits = bit_coarse_grain(fr);
    CHECK(bits.space().size() == 6);
    // P(A_l = C_l) = 1 and P(B_l = C_r) = 1 for the Fritz distribution.
    QSqrt2 agree(0);
    for (std::uint64_t j = 0; j < bits.space().event_count(); ++j) {
        const Event e(bits.space(), j);
        if (e.at("A_l") == e.at("C_l") && e.at("B_l") == e.at("C_r")) agree = agree + bits.at(j);
    }
    CHECK(agree == QSqrt2(1));
    std::vector<QSqrt2> bad(64, QSqrt2(Rational(1, 63)));
    CHECK_THROWS_AS(ExactDistribution(fr.space(), bad), InputError);
}

TEST_CASE("distribution text round trip") {
    const auto fr = fritz_distribution();
    const auto text = format_distribution(fr);
    const auto back = parse_distribution(text);
    CHECK(back.probs() == fr.probs());
    CHECK(parse_qsqrt2("(2+sqrt2)/32") == QSqrt2(Rational(1, 16), Rational(1, 32)));
    CHECK(parse_qsqrt2("0.125") == QSqrt2(Rational(1, 8)));
    CHECK(parse_qsqrt2("sqrt(2)*sqrt2") == QSqrt2(2));
    CHECK_THROWS_AS(parse_qsqrt2("2+"), InputError);
    CHECK_THROWS_AS(parse_distribution("variables A:2\n0 0.5\n0 0.5\n"), InputError);
}
