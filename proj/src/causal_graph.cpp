#include "tricausal/causal_graph.hpp"

#include "tricausal/errors.hpp"
#include "tricausal/events.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>

namespace tricausal {

NodeId NodeId::parse(const std::string& text) {
    if (text.empty()) throw InputError("empty node name");
    auto us = text.rfind('_');
    if (us != std::string::npos && us > 0 && us + 1 < text.size()) {
        bool digits = std::all_of(text.begin() + static_cast<std::ptrdiff_t>(us) + 1, text.end(),
                                  [](unsigned char c) { return std::isdigit(c) != 0; });
        if (digits) {
            int copy = std::stoi(text.substr(us + 1));
            if (copy < 1) throw InputError("copy-index must be positive: " + text);
            return NodeId{text.substr(0, us), copy};
        }
    }
    return NodeId{text};
}

std::string NodeId::str() const {
    if (!copy) return base;
    return base + "_" + std::to_string(*copy);
}

std::string to_string(const NodeSet& nodes) {
    std::string out = "{";
    bool first = true;
    for (const auto& n : nodes) {
        if (!first) out += ", ";
        out += n.str();
        first = false;
    }
    return out + "}";
}

NodeSet strip_copy_indices(const NodeSet& nodes) {
    NodeSet out;
    for (const auto& n : nodes) out.insert(n.stripped());
    return out;
}

CausalStructure CausalStructure::create(std::vector<NodeSpec> specs,
                                        std::vector<std::pair<NodeId, NodeId>> edges) {
    std::sort(specs.begin(), specs.end(),
              [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
    CausalStructure g;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        if (i > 0 && specs[i - 1].id == s.id) throw InputError("duplicate node " + s.id.str());
        if (s.role == NodeRole::Observable && s.cardinality < 1) {
            throw InputError("observable node " + s.id.str() + " needs cardinality >= 1");
        }
        g.index_[s.id] = g.nodes_.size();
        g.nodes_.push_back(s.id);
        g.roles_.push_back(s.role);
        if (s.role == NodeRole::Observable) g.cardinality_[s.id] = s.cardinality;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.parents_.assign(g.nodes_.size(), {});
    g.children_.assign(g.nodes_.size(), {});
    for (const auto& [from, to] : edges) {
        if (!g.contains(from) || !g.contains(to)) {
            throw InputError("edge " + from.str() + " -> " + to.str() + " has an unknown endpoint");
        }
        if (from == to) throw InputError("self-loop at " + from.str());
        g.parents_[g.index_of(to)].push_back(g.index_of(from));
        g.children_[g.index_of(from)].push_back(g.index_of(to));
    }
    g.edges_ = std::move(edges);

    // Kahn's algorithm; leftovers lie on a cycle.
    std::vector<std::size_t> indegree(g.nodes_.size());
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
        indegree[i] = g.parents_[i].size();
        if (indegree[i] == 0) ready.push_back(i);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        auto i = ready.front();
        ready.pop_front();
        ++seen;
        for (auto c : g.children_[i]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    if (seen != g.nodes_.size()) throw InputError("graph contains a directed cycle");
    return g;
}

std::size_t CausalStructure::index_of(const NodeId& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw InputError("unknown node " + n.str());
    return it->second;
}

NodeSet CausalStructure::observable() const {
    NodeSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (roles_[i] == NodeRole::Observable) out.insert(nodes_[i]);
    }
    return out;
}

NodeSet CausalStructure::latent() const {
    NodeSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (roles_[i] == NodeRole::Latent) out.insert(nodes_[i]);
    }
    return out;
}

bool CausalStructure::is_observable(const NodeId& n) const {
    return roles_[index_of(n)] == NodeRole::Observable;
}

NodeRole CausalStructure::role(const NodeId& n) const { return roles_[index_of(n)]; }

int CausalStructure::cardinality(const NodeId& n) const {
    index_of(n);
    auto it = cardinality_.find(n);
    return it == cardinality_.end() ? 0 : it->second;
}

NodeSet CausalStructure::parents(const NodeId& n) const {
    NodeSet out;
    for (auto p : parents_[index_of(n)]) out.insert(nodes_[p]);
    return out;
}

NodeSet CausalStructure::children(const NodeId& n) const {
    NodeSet out;
    for (auto c : children_[index_of(n)]) out.insert(nodes_[c]);
    return out;
}

NodeSet CausalStructure::parents(const NodeSet& ns) const {
    NodeSet out;
    for (const auto& n : ns) out.merge(parents(n));
    return out;
}

NodeSet CausalStructure::children(const NodeSet& ns) const {
    NodeSet out;
    for (const auto& n : ns) out.merge(children(n));
    return out;
}

namespace {

std::vector<char> reach(const std::vector<std::vector<std::size_t>>& adj,
                        const std::vector<std::size_t>& seeds) {
    std::vector<char> mark(adj.size(), 0);
    std::vector<std::size_t> stack;
    for (auto i : seeds) {
        if (!mark[i]) {
            mark[i] = 1;
            stack.push_back(i);
        }
    }
    while (!stack.empty()) {
        auto i = stack.back();
        stack.pop_back();
        for (auto k : adj[i]) {
            if (!mark[k]) {
                mark[k] = 1;
                stack.push_back(k);
            }
        }
    }
    return mark;
}

}  // namespace

NodeSet CausalStructure::ancestors(const NodeSet& ns) const {
    std::vector<std::size_t> seeds;
    for (const auto& n : ns) seeds.push_back(index_of(n));
    auto mark = reach(parents_, seeds);
    NodeSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (mark[i]) out.insert(nodes_[i]);
    }
    return out;
}

NodeSet CausalStructure::descendants(const NodeSet& ns) const {
    std::vector<std::size_t> seeds;
    for (const auto& n : ns) seeds.push_back(index_of(n));
    auto mark = reach(children_, seeds);
    NodeSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (mark[i]) out.insert(nodes_[i]);
    }
    return out;
}

CausalStructure CausalStructure::induced_subgraph(const NodeSet& ns) const {
    std::vector<NodeSpec> specs;
    for (const auto& n : ns) {
        auto i = index_of(n);
        specs.push_back({n, roles_[i], cardinality(n)});
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : edges_) {
        if (ns.count(e.first) && ns.count(e.second)) edges.push_back(e);
    }
    return create(std::move(specs), std::move(edges));
}

CausalStructure CausalStructure::ancestral_subgraph(const NodeSet& ns) const {
    return induced_subgraph(ancestors(ns));
}

bool CausalStructure::operator==(const CausalStructure& other) const {
    return nodes_ == other.nodes_ && roles_ == other.roles_ && edges_ == other.edges_ &&
           cardinality_ == other.cardinality_;
}

bool graphs_copy_equivalent(const CausalStructure& g1, const CausalStructure& g2) {
    auto strip = [](const CausalStructure& g, NodeSet& nodes,
                    std::set<std::pair<NodeId, NodeId>>& edges,
                    std::map<NodeId, NodeRole>& roles) {
        for (const auto& n : g.nodes()) {
            if (!nodes.insert(n.stripped()).second) return false;
            roles[n.stripped()] = g.role(n);
        }
        for (const auto& [a, b] : g.edges()) edges.insert({a.stripped(), b.stripped()});
        return true;
    };
    NodeSet n1, n2;
    std::set<std::pair<NodeId, NodeId>> e1, e2;
    std::map<NodeId, NodeRole> r1, r2;
    if (!strip(g1, n1, e1, r1) || !strip(g2, n2, e2, r2)) return false;
    return n1 == n2 && e1 == e2 && r1 == r2;
}

bool verify_full_compatibility(const CausalStructure& g, const Distribution& p, double tol) {
    const EventSpace& space = p.space();
    if (NodeSet(space.variables().begin(), space.variables().end()) != g.node_set()) {
        throw InputError("distribution variables do not match the graph nodes");
    }
    for (const auto& [n, card] : g.cardinalities()) {
        if (space.cardinality(n) != card) {
            throw InputError("cardinality mismatch at node " + n.str());
        }
    }

    // For each node, the family marginal P(n, Pa(n)) and parent marginal P(Pa(n)).
    struct Family {
        int node_pos;
        Distribution joint;
        Distribution pa;
        std::vector<int> joint_pos;  // positions in the full space, family order
        std::vector<int> pa_pos;
    };
    std::vector<Family> families;
    for (const auto& n : g.nodes()) {
        NodeSet pa = g.parents(n);
        NodeSet fam = pa;
        fam.insert(n);
        Family f{space.position(n), marginalize(p, fam), marginalize(p, pa), {}, {}};
        for (const auto& v : f.joint.space().variables()) f.joint_pos.push_back(space.position(v));
        for (const auto& v : f.pa.space().variables()) f.pa_pos.push_back(space.position(v));
        families.push_back(std::move(f));
    }

    std::vector<int> sub;
    for (std::uint64_t j = 0; j < space.event_count(); ++j) {
        auto outcome = space.decode(j);
        double prod = 1.0;
        bool skip = false;
        for (const auto& f : families) {
            sub.clear();
            for (int pos : f.pa_pos) sub.push_back(outcome[static_cast<std::size_t>(pos)]);
            double denom = f.pa.prob(sub);
            if (denom == 0.0) {
                skip = true;
                break;
            }
            sub.clear();
            for (int pos : f.joint_pos) sub.push_back(outcome[static_cast<std::size_t>(pos)]);
            prod *= f.joint.prob(sub) / denom;
        }
        if (skip) continue;
        if (std::fabs(p.at(j) - prod) > tol) return false;
    }
    return true;
}

}  // namespace tricausal
