#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tricausal {

// A node label with an optional copy-index, e.g. "A" or "A_2". Ordering is
// lexicographic on (base, copy) with the un-indexed node first.
struct NodeId {
    std::string base;
    std::optional<int> copy;

    NodeId() = default;
    NodeId(std::string b, std::optional<int> c = std::nullopt) : base(std::move(b)), copy(c) {}
    NodeId(const char* b) : base(b) {}

    // "A_2" -> {A, 2}; "S_A" -> {S_A}; only a trailing "_<digits>" is a copy-index.
    static NodeId parse(const std::string& text);
    std::string str() const;
    NodeId stripped() const { return NodeId{base}; }
    bool copy_equivalent(const NodeId& other) const { return base == other.base; }

    auto operator<=>(const NodeId&) const = default;
    bool operator==(const NodeId&) const = default;
};

using NodeSet = std::set<NodeId>;

std::string to_string(const NodeSet& nodes);
NodeSet strip_copy_indices(const NodeSet& nodes);

enum class NodeRole { Observable, Latent };

struct NodeSpec {
    NodeId id;
    NodeRole role = NodeRole::Observable;
    int cardinality = 0;  // observables only; 0 for latents
};

// Immutable DAG over observable and latent nodes.
class CausalStructure {
public:
    // Validates endpoints, acyclicity, roles and cardinalities; throws InputError.
    static CausalStructure create(std::vector<NodeSpec> nodes,
                                  std::vector<std::pair<NodeId, NodeId>> edges);

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    NodeSet node_set() const { return {nodes_.begin(), nodes_.end()}; }
    NodeSet observable() const;
    NodeSet latent() const;
    bool contains(const NodeId& n) const { return index_.count(n) != 0; }
    bool is_observable(const NodeId& n) const;
    int cardinality(const NodeId& n) const;
    const std::map<NodeId, int>& cardinalities() const { return cardinality_; }
    NodeRole role(const NodeId& n) const;

    NodeSet parents(const NodeId& n) const;
    NodeSet children(const NodeId& n) const;
    NodeSet parents(const NodeSet& ns) const;
    NodeSet children(const NodeSet& ns) const;
    // Closure under parents, including ns itself.
    NodeSet ancestors(const NodeSet& ns) const;
    // Closure under children, including ns itself.
    NodeSet descendants(const NodeSet& ns) const;

    CausalStructure induced_subgraph(const NodeSet& ns) const;
    CausalStructure ancestral_subgraph(const NodeSet& ns) const;

    bool operator==(const CausalStructure& other) const;

private:
    std::size_t index_of(const NodeId& n) const;

    std::vector<NodeId> nodes_;  // sorted
    std::vector<NodeRole> roles_;
    std::vector<std::pair<NodeId, NodeId>> edges_;  // sorted
    std::map<NodeId, std::size_t> index_;
    std::map<NodeId, int> cardinality_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
};

// True iff removing copy-indices maps g1 and g2 onto the same graph, with the
// removal injective on both node sets (no two copies of one base node).
bool graphs_copy_equivalent(const CausalStructure& g1, const CausalStructure& g2);

template <typename T> class BasicDistribution;

// Checks P(N) = prod_n P(n | Pa(n)) on every joint event; events whose
// conditioning marginal is zero are skipped. `p` must be over all nodes of g.
bool verify_full_compatibility(const CausalStructure& g, const BasicDistribution<double>& p,
                               double tol);

}  // namespace tricausal
