#pragma once

#include "tricausal/causal_graph.hpp"

#include <string>

namespace tricausal {

// A <- X,Y ; B <- Y,Z ; C <- Z,X with latent X, Y, Z.
CausalStructure triangle_structure(int cardinality = 4);
// A <- S_A, lambda ; B <- S_B, lambda with observed settings S_A, S_B.
CausalStructure bell_structure(int outcomes = 2, int settings = 2);

// Inflated triangles. Observables carry `cardinality` outcomes.
CausalStructure spiral_graph(int cardinality = 4);
CausalStructure wagon_wheel_graph(int cardinality = 4);
CausalStructure web_graph(int cardinality = 4);

// "triangle", "bell", "spiral", "wagon-wheel", "web".
CausalStructure builtin_structure(const std::string& name, int cardinality = 4);

// JSON document:
//   {"nodes": [{"name": "A", "role": "observable", "cardinality": 4, "copy_index": 2}, ...],
//    "edges": [["X", "A_2"], ...]}
// Edge endpoints use the "Base_copy" spelling; copy_index is optional.
CausalStructure structure_from_json(const std::string& text);
std::string structure_to_json(const CausalStructure& g);

}  // namespace tricausal
