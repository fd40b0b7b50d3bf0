#include <doctest.h>

#include "tricausal/inflation.hpp"
#include "tricausal/symmetry.hpp"

#include <numeric>
#include <random>

using namespace tricausal;

namespace {

MarginalScenario three_pairs() {
    return MarginalScenario({{"A", "B"}, {"B", "C"}, {"A", "C"}}, {{"A", 2}, {"B", 2}, {"C", 2}});
}

NodeId n(const char* base, int copy) { return NodeId(base, copy); }

// Web maps written as explicit images; unlisted variables are fixed.
std::map<NodeId, NodeId> web_map(int which) {
    std::map<NodeId, NodeId> m;
    auto swap = [&](NodeId a, NodeId b) {
        m[a] = b;
        m[b] = a;
    };
    switch (which) {
        case 1:
            for (const char* v : {"A", "B", "C"}) {
                swap(n(v, 1), n(v, 4));
                swap(n(v, 2), n(v, 3));
            }
            break;
        case 2:
            swap(n("A", 2), n("A", 3));
            swap(n("B", 1), n("C", 1));
            swap(n("B", 4), n("C", 4));
            swap(n("B", 2), n("C", 3));
            swap(n("B", 3), n("C", 2));
            break;
        case 3:
            for (int i = 1; i <= 4; ++i) {
                m[n("A", i)] = n("C", i);
                m[n("B", i)] = n("A", i);
                m[n("C", i)] = n("B", i);
            }
            break;
        default:
            swap(n("B", 1), n("B", 2));
            swap(n("B", 3), n("B", 4));
            swap(n("C", 1), n("C", 3));
            swap(n("C", 2), n("C", 4));
    }
    return m;
}

const InflatedScenario& web() {
    static const InflatedScenario sc(builtin_inflation("web"));
    return sc;
}

PermGroup triangle_group() {
    return stabilizer_group(MarginalScenario({{"A", "B", "C"}}, {{"A", 4}, {"B", 4}, {"C", 4}}));
}

}  // namespace

TEST_CASE("group closure and cycle notation") {
    const std::vector<NodeId> vars{"A", "B", "C"};
    const PermGroup g(vars, {{1, 2, 0}, {1, 0, 2}});
    CHECK(g.order() == 6);
    CHECK(g.cycles({0, 1, 2}) == "()");
    CHECK(g.cycles({1, 2, 0}) == "(A B C)");
    CHECK(g.cycles({1, 0, 2}) == "(A B)");
    const Permutation p{1, 2, 0}, q{1, 0, 2};
    CHECK(compose(p, inverse(p)) == Permutation{0, 1, 2});
    CHECK(g.contains(compose(p, q)));
    CHECK(PermGroup(vars, {{1, 0, 2}}).order() == 2);
}

TEST_CASE("triangle scenario has the symmetric group on three parties") {
    CHECK(triangle_group().order() == 6);
    CHECK(stabilizer_group(three_pairs()).order() == 6);
}

TEST_CASE("web stabilizer has order 48 and contains the four listed maps") {
    const auto g = stabilizer_group(web().scenario());
    CHECK(g.order() == 48);
    for (int k = 1; k <= 4; ++k) {
        CAPTURE(k);
        CHECK(g.contains(g.from_map(web_map(k))));
    }
    CHECK(PermGroup(g.variables(), {g.from_map(web_map(1)), g.from_map(web_map(2)), g.from_map(web_map(3)),
                                    g.from_map(web_map(4))})
              .order() == 48);
    CHECK(deflation_consistent(g, triangle_group()));
}

TEST_CASE("group elements permute rows and joint events bijectively") {
    const auto& sc = web().scenario();
    const auto g = stabilizer_group(sc);
    std::mt19937_64 rng(3);
    for (const auto& p : g.generators()) {
        std::uniform_int_distribution<std::uint64_t> row(0, sc.row_count() - 1), joint(0, sc.joint().event_count() - 1);
        for (int t = 0; t < 50; ++t) {
            const auto r = row(rng);
            const auto r2 = act_on_row(sc, p, r);
            CHECK(act_on_row(sc, inverse(p), r2) == r);
            const auto j = joint(rng);
            CHECK(act_on_joint(sc, inverse(p), act_on_joint(sc, p, j)) == j);
        }
    }
}

TEST_CASE("symmetric incidence commutes with orbit summation") {
    const auto sc = three_pairs();
    const auto g = stabilizer_group(sc);
    const auto s = symmetric_incidence(sc, g);
    const auto m = incidence_matrix(sc);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> vj(sc.joint().event_count());
        for (double& x : vj) x = u(rng);
        const auto lhs = s.matrix.multiply(symmetric_joint_vector(s, vj));
        const auto rhs = symmetric_marginal_vector(s, m.multiply(vj));
        REQUIRE(lhs.size() == rhs.size());
        for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
    // Orbit sizes add up to the joint event count.
    const auto total = std::accumulate(s.column_orbit_size.begin(), s.column_orbit_size.end(), std::uint64_t{0});
    CHECK(total == sc.joint().event_count());
}

TEST_CASE("web symmetric incidence sizes and column sums") {
    const auto& sc = web().scenario();
    const auto s = symmetric_incidence(sc, stabilizer_group(sc));
    CHECK(s.matrix.rows == 450);
    CHECK(s.matrix.cols == 358120);
    // Each representative event restricts to one row per context.
    for (std::uint64_t c = 0; c < s.matrix.cols; c += 997) {
        std::int64_t sum = 0;
        for (auto k = s.matrix.col_ptr[c]; k < s.matrix.col_ptr[c + 1]; ++k) sum += s.matrix.values[k];
        CHECK(sum == static_cast<std::int64_t>(sc.contexts().size()));
    }
}

TEST_CASE("symmetric certificate expands to a certificate of the full problem") {
    const auto sc = three_pairs();
    const auto s = symmetric_incidence(sc, stabilizer_group(sc));
    // Pairwise anticorrelation of three bits is frustrated.
    std::vector<double> v;
    for (int k = 0; k < 3; ++k) v.insert(v.end(), {0.0, 0.5, 0.5, 0.0});
    const auto r = solve_feasibility({s.matrix, symmetric_marginal_vector(s, v)});
    REQUIRE(std::holds_alternative<Infeasible>(r));
    const auto full = expand_and_certify(s, sc, std::get<Infeasible>(r).certificate, v);
    REQUIRE(full.has_value());
    const auto m = incidence_matrix(sc);
    for (std::uint64_t j = 0; j < m.cols; ++j) {
        std::int64_t t = 0;
        for (std::uint64_t i = 0; i < m.rows; ++i) t += full->coefficients()[i] * m.at(i, j);
        CHECK(t >= 0);
    }
    double dot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += full->coefficients()[i] * v[i];
    CHECK(dot < 0);
    // Coefficients are constant on row orbits.
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(full->coefficients()[i] == full->coefficients()[s.row_rep[s.row_orbit[i]]]);
    }
}

TEST_CASE("symmetric feasible data stays feasible") {
    const auto sc = three_pairs();
    const auto s = symmetric_incidence(sc, stabilizer_group(sc));
    std::vector<double> v(12, 0.25);
    CHECK(std::holds_alternative<Feasible>(solve_feasibility({s.matrix, symmetric_marginal_vector(s, v)})));
}
