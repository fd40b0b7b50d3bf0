#include <doctest.h>

#include "tricausal/causal_graph.hpp"
#include "tricausal/errors.hpp"
#include "tricausal/events.hpp"
#include "tricausal/structures.hpp"

#include <algorithm>
#include <random>

using namespace tricausal;

TEST_CASE("node ids split only a trailing numeric copy index") {
    CHECK(NodeId::parse("A_2") == NodeId("A", 2));
    CHECK(NodeId::parse("S_A") == NodeId("S_A"));
    CHECK(NodeId::parse("lambda") == NodeId("lambda"));
    CHECK(NodeId::parse("X_12").copy == 12);
    CHECK(NodeId("A", 3).str() == "A_3");
    CHECK(NodeId("A", 3).stripped() == NodeId("A"));
}

TEST_CASE("triangle family relations") {
    const auto g = triangle_structure();
    CHECK(g.observable() == NodeSet{"A", "B", "C"});
    CHECK(g.latent() == NodeSet{"X", "Y", "Z"});
    CHECK(g.parents(NodeId("A")) == NodeSet{"X", "Y"});
    CHECK(g.children(NodeId("Y")) == NodeSet{"A", "B"});
    CHECK(g.ancestors(NodeSet{"A", "B"}) == NodeSet{"A", "B", "X", "Y", "Z"});
    CHECK(g.descendants(NodeSet{"X"}) == NodeSet{"X", "A", "C"});
    CHECK(g.cardinality(NodeId("B")) == 4);
    const auto sub = g.ancestral_subgraph(NodeSet{"A"});
    CHECK(sub.node_set() == NodeSet{"A", "X", "Y"});
    CHECK(sub.edges().size() == 2);
    CHECK(g.induced_subgraph(NodeSet{"A", "B", "Y"}).edges().size() == 2);
}

TEST_CASE("invalid structures are rejected") {
    const std::vector<NodeSpec> nodes{{"A", NodeRole::Observable, 2}, {"B", NodeRole::Observable, 2}};
    CHECK_THROWS_AS(CausalStructure::create(nodes, {{"A", "B"}, {"B", "A"}}), InputError);
    CHECK_THROWS_AS(CausalStructure::create(nodes, {{"A", "Q"}}), InputError);
    CHECK_THROWS_AS(CausalStructure::create({{"A", NodeRole::Observable, 0}}, {}), InputError);
    CHECK_THROWS_AS(CausalStructure::create({{"A", NodeRole::Observable, 2}, {"A", NodeRole::Observable, 2}}, {}),
                    InputError);
    CHECK_THROWS_AS(builtin_structure("pentagon"), InputError);
}

TEST_CASE("copy equivalence strips indices injectively") {
    const auto g = triangle_structure();
    const auto w = wagon_wheel_graph();
    const auto sub = w.ancestral_subgraph(NodeSet{NodeId("A", 1), NodeId("B", 1)});
    CHECK(graphs_copy_equivalent(sub, g.ancestral_subgraph(NodeSet{"A", "B"})));
    // A_1 and A_2 both strip to A.
    const auto two = w.ancestral_subgraph(NodeSet{NodeId("A", 1), NodeId("A", 2)});
    CHECK_FALSE(graphs_copy_equivalent(two, g.ancestral_subgraph(NodeSet{"A"})));
}

TEST_CASE("structure json round trip") {
    for (const char* name : {"triangle", "bell", "spiral", "wagon-wheel", "web"}) {
        const auto g = builtin_structure(name);
        CHECK(structure_from_json(structure_to_json(g)) == g);
    }
}

TEST_CASE("full compatibility holds for a sampled causal model and fails after tampering") {
    // Bell structure with binary latent: P = P(S_A) P(S_B) P(l) P(A|S_A,l) P(B|S_B,l).
    const auto g = bell_structure(2, 2);
    std::vector<NodeId> vars{"A", "B", "S_A", "S_B", "lambda"};
    EventSpace space(vars, {2, 2, 2, 2, 2});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    const double ps_a = u(rng), ps_b = u(rng), pl = u(rng);
    double pa[2][2], pb[2][2];
    for (auto& r : pa) for (auto& x : r) x = u(rng);
    for (auto& r : pb) for (auto& x : r) x = u(rng);
    std::vector<double> probs(space.event_count());
    for (std::uint64_t j = 0; j < probs.size(); ++j) {
        const auto o = space.decode(j);
        const int a = o[space.position("A")], b = o[space.position("B")];
        const int sa = o[space.position("S_A")], sb = o[space.position("S_B")], l = o[space.position("lambda")];
        const double qa = pa[sa][l], qb = pb[sb][l];
        probs[j] = (sa ? ps_a : 1 - ps_a) * (sb ? ps_b : 1 - ps_b) * (l ? pl : 1 - pl) * (a ? qa : 1 - qa) *
                   (b ? qb : 1 - qb);
    }
    CHECK(verify_full_compatibility(g, Distribution(space, probs), 1e-12));
    // Moving mass between two events correlates S_A with B.
    const auto big = std::max_element(probs.begin() + 1, probs.end()) - probs.begin();
    const double shift = probs[big] / 2;
    probs[0] += shift;
    probs[big] -= shift;
    CHECK_FALSE(verify_full_compatibility(g, Distribution(space, probs), 1e-9));
}
