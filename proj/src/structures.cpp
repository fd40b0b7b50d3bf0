#include "tricausal/structures.hpp"

#include "tricausal/errors.hpp"

#include <json.hpp>

namespace tricausal {
namespace {

using Edge = std::pair<NodeId, NodeId>;

NodeSpec obs(const std::string& name, int card) {
    return {NodeId::parse(name), NodeRole::Observable, card};
}
NodeSpec lat(const std::string& name) { return {NodeId::parse(name), NodeRole::Latent, 0}; }

// Each party copy is listed with its two latent parents.
struct PartyCopy {
    const char* party;
    const char* first;
    const char* second;
};

CausalStructure from_party_table(std::initializer_list<PartyCopy> parties,
                                 std::initializer_list<const char*> latents, int card) {
    std::vector<NodeSpec> specs;
    std::vector<Edge> edges;
    for (const char* l : latents) specs.push_back(lat(l));
    for (const auto& p : parties) {
        specs.push_back(obs(p.party, card));
        edges.emplace_back(NodeId::parse(p.first), NodeId::parse(p.party));
        edges.emplace_back(NodeId::parse(p.second), NodeId::parse(p.party));
    }
    return CausalStructure::create(std::move(specs), std::move(edges));
}

}  // namespace

CausalStructure triangle_structure(int cardinality) {
    return from_party_table({{"A", "X", "Y"}, {"B", "Y", "Z"}, {"C", "Z", "X"}}, {"X", "Y", "Z"},
                            cardinality);
}

CausalStructure bell_structure(int outcomes, int settings) {
    std::vector<NodeSpec> specs{obs("A", outcomes), obs("B", outcomes), obs("S_A", settings),
                                obs("S_B", settings), lat("lambda")};
    std::vector<Edge> edges{{"S_A", "A"}, {"lambda", "A"}, {"S_B", "B"}, {"lambda", "B"}};
    return CausalStructure::create(std::move(specs), std::move(edges));
}

CausalStructure spiral_graph(int cardinality) {
    return from_party_table({{"A_1", "X_1", "Y_1"},
                             {"A_2", "X_1", "Y_2"},
                             {"B_1", "Y_1", "Z_1"},
                             {"B_2", "Y_1", "Z_2"},
                             {"C_1", "Z_1", "X_1"},
                             {"C_2", "Z_1", "X_2"}},
                            {"X_1", "X_2", "Y_1", "Y_2", "Z_1", "Z_2"}, cardinality);
}

CausalStructure wagon_wheel_graph(int cardinality) {
    return from_party_table({{"A_1", "X_1", "Y_1"},
                             {"A_2", "X_2", "Y_1"},
                             {"B_1", "Y_1", "Z_1"},
                             {"B_2", "Y_1", "Z_2"},
                             {"C_1", "Z_2", "X_1"},
                             {"C_2", "Z_2", "X_2"},
                             {"C_3", "Z_1", "X_2"},
                             {"C_4", "Z_1", "X_1"}},
                            {"X_1", "X_2", "Y_1", "Z_1", "Z_2"}, cardinality);
}

CausalStructure web_graph(int cardinality) {
    return from_party_table({{"A_1", "X_1", "Y_1"},
                             {"A_2", "X_1", "Y_2"},
                             {"A_3", "X_2", "Y_1"},
                             {"A_4", "X_2", "Y_2"},
                             {"B_1", "Y_1", "Z_1"},
                             {"B_2", "Y_1", "Z_2"},
                             {"B_3", "Y_2", "Z_1"},
                             {"B_4", "Y_2", "Z_2"},
                             {"C_1", "Z_1", "X_1"},
                             {"C_2", "Z_1", "X_2"},
                             {"C_3", "Z_2", "X_1"},
                             {"C_4", "Z_2", "X_2"}},
                            {"X_1", "X_2", "Y_1", "Y_2", "Z_1", "Z_2"}, cardinality);
}

CausalStructure builtin_structure(const std::string& name, int cardinality) {
    if (name == "triangle") return triangle_structure(cardinality);
    if (name == "bell") return bell_structure(2, 2);
    if (name == "spiral") return spiral_graph(cardinality);
    if (name == "wagon-wheel") return wagon_wheel_graph(cardinality);
    if (name == "web") return web_graph(cardinality);
    throw InputError("unknown built-in structure '" + name + "'");
}

CausalStructure structure_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("structure file: ") + e.what());
    }
    std::vector<NodeSpec> specs;
    std::vector<Edge> edges;
    try {
        for (const auto& n : doc.at("nodes")) {
            NodeId id = NodeId::parse(n.at("name").get<std::string>());
            if (n.contains("copy_index")) {
                if (id.copy) throw InputError("node " + id.str() + " has two copy-indices");
                id.copy = n.at("copy_index").get<int>();
                if (*id.copy < 1) throw InputError("copy_index must be positive");
            }
            const auto role = n.value("role", std::string("observable"));
            if (role == "observable") {
                specs.push_back({id, NodeRole::Observable, n.at("cardinality").get<int>()});
            } else if (role == "latent") {
                specs.push_back({id, NodeRole::Latent, 0});
            } else {
                throw InputError("unknown node role '" + role + "'");
            }
        }
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw InputError("edges must be [from, to] pairs");
            edges.emplace_back(NodeId::parse(e[0].get<std::string>()),
                               NodeId::parse(e[1].get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("structure file: ") + e.what());
    }
    return CausalStructure::create(std::move(specs), std::move(edges));
}

std::string structure_to_json(const CausalStructure& g) {
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& n : g.nodes()) {
        nlohmann::json node{{"name", n.base}};
        if (n.copy) node["copy_index"] = *n.copy;
        if (g.is_observable(n)) {
            node["role"] = "observable";
            node["cardinality"] = g.cardinality(n);
        } else {
            node["role"] = "latent";
        }
        doc["nodes"].push_back(node);
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : g.edges()) doc["edges"].push_back({a.str(), b.str()});
    return doc.dump(2);
}

}  // namespace tricausal
