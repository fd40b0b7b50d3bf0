#pragma once

#include "tricausal/causal_graph.hpp"
#include "tricausal/errors.hpp"
#include "tricausal/qsqrt2.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tricausal {

// Ordered variables with finite outcome counts. Events are indexed by a
// mixed-radix integer with the first variable most significant.
class EventSpace {
public:
    EventSpace() = default;
    // Variables are sorted into NodeId order; duplicates are rejected.
    EventSpace(std::vector<NodeId> variables, std::vector<int> cardinalities);
    static EventSpace from_map(const std::map<NodeId, int>& cards);

    const std::vector<NodeId>& variables() const { return variables_; }
    const std::vector<int>& cardinalities() const { return cards_; }
    std::size_t size() const { return variables_.size(); }
    std::uint64_t event_count() const { return count_; }
    int position(const NodeId& v) const;  // -1 if absent
    bool contains(const NodeId& v) const { return position(v) >= 0; }
    int cardinality(const NodeId& v) const;

    std::uint64_t encode(std::span<const int> outcomes) const;
    std::vector<int> decode(std::uint64_t index) const;
    // Sub-space over `vars` (must be a subset), in NodeId order.
    EventSpace subspace(const NodeSet& vars) const;

    bool operator==(const EventSpace&) const = default;

private:
    std::vector<NodeId> variables_;
    std::vector<int> cards_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t count_ = 1;
};

// A partial assignment of outcomes to variables.
class Event {
public:
    Event() = default;
    explicit Event(std::map<NodeId, int> assignment) : assignment_(std::move(assignment)) {}
    Event(const EventSpace& space, std::uint64_t index);

    const std::map<NodeId, int>& assignment() const { return assignment_; }
    NodeSet domain() const;
    int at(const NodeId& v) const;
    std::string str() const;

    bool operator==(const Event&) const = default;
    auto operator<=>(const Event&) const = default;

private:
    std::map<NodeId, int> assignment_;
};

Event restrict(const Event& s, const NodeSet& w);

// Dense probability table over an EventSpace. T is double or QSqrt2.
template <typename T>
class BasicDistribution {
public:
    BasicDistribution() = default;
    // Validates nonnegativity and unit mass: within `tol` for double, exactly
    // for QSqrt2 (tol ignored).
    BasicDistribution(EventSpace space, std::vector<T> probs, double tol = 1e-12);

    const EventSpace& space() const { return space_; }
    const std::vector<T>& probs() const { return probs_; }
    const T& at(std::uint64_t index) const { return probs_[index]; }
    T prob(const Event& e) const;
    T prob(std::span<const int> outcomes) const { return probs_[space_.encode(outcomes)]; }

    BasicDistribution<double> to_double() const;

private:
    EventSpace space_;
    std::vector<T> probs_;
};

using Distribution = BasicDistribution<double>;
using ExactDistribution = BasicDistribution<QSqrt2>;

template <typename T>
BasicDistribution<T> marginalize(const BasicDistribution<T>& p, const NodeSet& w);

// Each 4-outcome variable V becomes binary V_l, V_r with outcome a -> (a/2, a%2).
template <typename T>
BasicDistribution<T> bit_coarse_grain(const BasicDistribution<T>& p);

// Product distribution of independent marginals over disjoint variable sets.
template <typename T>
BasicDistribution<T> product(const std::vector<BasicDistribution<T>>& factors);

// Bit-variable names used by bit_coarse_grain.
NodeId left_bit(const NodeId& v);
NodeId right_bit(const NodeId& v);

BasicDistribution<double> uniform_distribution(const EventSpace& space);

}  // namespace tricausal
