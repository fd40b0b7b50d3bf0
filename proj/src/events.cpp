#include "tricausal/events.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tricausal {

EventSpace::EventSpace(std::vector<NodeId> variables, std::vector<int> cardinalities) {
    if (variables.size() != cardinalities.size()) {
        throw InputError("event space: variable and cardinality lists differ in length");
    }
    std::vector<std::size_t> order(variables.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return variables[a] < variables[b]; });
    for (auto i : order) {
        if (!variables_.empty() && variables_.back() == variables[i]) {
            throw InputError("event space: duplicate variable " + variables[i].str());
        }
        if (cardinalities[i] < 1) {
            throw InputError("event space: variable " + variables[i].str() + " has no outcomes");
        }
        variables_.push_back(variables[i]);
        cards_.push_back(cardinalities[i]);
    }
    strides_.assign(variables_.size(), 1);
    count_ = 1;
    for (std::size_t k = variables_.size(); k-- > 0;) {
        strides_[k] = count_;
        count_ *= static_cast<std::uint64_t>(cards_[k]);
    }
}

EventSpace EventSpace::from_map(const std::map<NodeId, int>& cards) {
    std::vector<NodeId> vars;
    std::vector<int> cs;
    for (const auto& [v, c] : cards) {
        vars.push_back(v);
        cs.push_back(c);
    }
    return EventSpace(std::move(vars), std::move(cs));
}

int EventSpace::position(const NodeId& v) const {
    auto it = std::lower_bound(variables_.begin(), variables_.end(), v);
    if (it == variables_.end() || *it != v) return -1;
    return static_cast<int>(it - variables_.begin());
}

int EventSpace::cardinality(const NodeId& v) const {
    int pos = position(v);
    if (pos < 0) throw InputError("variable " + v.str() + " not in event space");
    return cards_[static_cast<std::size_t>(pos)];
}

std::uint64_t EventSpace::encode(std::span<const int> outcomes) const {
    if (outcomes.size() != variables_.size()) throw InputError("event arity mismatch");
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k] < 0 || outcomes[k] >= cards_[k]) {
            throw InputError("outcome out of range for " + variables_[k].str());
        }
        idx += strides_[k] * static_cast<std::uint64_t>(outcomes[k]);
    }
    return idx;
}

std::vector<int> EventSpace::decode(std::uint64_t index) const {
    std::vector<int> out(variables_.size());
    for (std::size_t k = variables_.size(); k-- > 0;) {
        auto c = static_cast<std::uint64_t>(cards_[k]);
        out[k] = static_cast<int>(index % c);
        index /= c;
    }
    return out;
}

EventSpace EventSpace::subspace(const NodeSet& vars) const {
    std::vector<NodeId> vs;
    std::vector<int> cs;
    for (const auto& v : vars) {
        vs.push_back(v);
        cs.push_back(cardinality(v));
    }
    return EventSpace(std::move(vs), std::move(cs));
}

Event::Event(const EventSpace& space, std::uint64_t index) {
    auto outcomes = space.decode(index);
    for (std::size_t k = 0; k < outcomes.size(); ++k) assignment_[space.variables()[k]] = outcomes[k];
}

NodeSet Event::domain() const {
    NodeSet out;
    for (const auto& [v, o] : assignment_) out.insert(v);
    return out;
}

int Event::at(const NodeId& v) const {
    auto it = assignment_.find(v);
    if (it == assignment_.end()) throw InputError("event does not assign " + v.str());
    return it->second;
}

std::string Event::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, o] : assignment_) {
        if (!first) out += ", ";
        out += v.str() + "->" + std::to_string(o);
        first = false;
    }
    return out + "}";
}

Event restrict(const Event& s, const NodeSet& w) {
    std::map<NodeId, int> out;
    for (const auto& v : w) out[v] = s.at(v);
    return Event(std::move(out));
}

namespace {

bool check_mass(const std::vector<double>& probs, double tol) {
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= -tol)) return false;
        total += p;
    }
    return std::fabs(total - 1.0) <= tol;
}

bool check_mass(const std::vector<QSqrt2>& probs, double) {
    QSqrt2 total;
    for (const auto& p : probs) {
        if (p.sign() < 0) return false;
        total += p;
    }
    return total == QSqrt2(1);
}

// Index map from events of `big` to events of its subspace `small`.
std::uint64_t project(const EventSpace& big, const std::vector<int>& positions,
                      const EventSpace& small, std::uint64_t j, std::vector<int>& scratch) {
    auto outcome = big.decode(j);
    scratch.resize(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
        scratch[k] = outcome[static_cast<std::size_t>(positions[k])];
    }
    return small.encode(scratch);
}

}  // namespace

template <typename T>
BasicDistribution<T>::BasicDistribution(EventSpace space, std::vector<T> probs, double tol)
    : space_(std::move(space)), probs_(std::move(probs)) {
    if (probs_.size() != space_.event_count()) {
        throw InputError("distribution has " + std::to_string(probs_.size()) + " entries, expected " +
                         std::to_string(space_.event_count()));
    }
    if (!check_mass(probs_, tol)) {
        throw InputError("distribution is negative or does not sum to one");
    }
}

template <typename T>
T BasicDistribution<T>::prob(const Event& e) const {
    std::vector<int> outcomes;
    for (const auto& v : space_.variables()) outcomes.push_back(e.at(v));
    if (e.assignment().size() != outcomes.size()) throw InputError("event domain mismatch");
    return probs_[space_.encode(outcomes)];
}

template <typename T>
BasicDistribution<double> BasicDistribution<T>::to_double() const {
    if constexpr (std::is_same_v<T, double>) {
        return *this;
    } else {
        std::vector<double> out;
        out.reserve(probs_.size());
        for (const auto& p : probs_) out.push_back(tricausal::to_double(p));
        return BasicDistribution<double>(space_, std::move(out), 1e-12);
    }
}

template <typename T>
BasicDistribution<T> marginalize(const BasicDistribution<T>& p, const NodeSet& w) {
    const auto& space = p.space();
    for (const auto& v : w) {
        if (!space.contains(v)) throw InputError("cannot marginalize onto unknown variable " + v.str());
    }
    EventSpace sub = space.subspace(w);
    std::vector<int> positions;
    for (const auto& v : sub.variables()) positions.push_back(space.position(v));
    std::vector<T> probs(sub.event_count(), T(0));
    std::vector<int> scratch;
    for (std::uint64_t j = 0; j < space.event_count(); ++j) {
        probs[project(space, positions, sub, j, scratch)] += p.at(j);
    }
    return BasicDistribution<T>(std::move(sub), std::move(probs), 1e-10);
}

NodeId left_bit(const NodeId& v) { return NodeId{v.str() + "_l"}; }
NodeId right_bit(const NodeId& v) { return NodeId{v.str() + "_r"}; }

template <typename T>
BasicDistribution<T> bit_coarse_grain(const BasicDistribution<T>& p) {
    const auto& space = p.space();
    std::vector<NodeId> vars;
    std::vector<int> cards;
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (space.cardinalities()[k] != 4) {
            throw InputError("bit coarse-graining needs 4 outcomes; " + space.variables()[k].str() +
                             " has " + std::to_string(space.cardinalities()[k]));
        }
        vars.push_back(left_bit(space.variables()[k]));
        vars.push_back(right_bit(space.variables()[k]));
        cards.push_back(2);
        cards.push_back(2);
    }
    EventSpace bits(vars, cards);
    std::vector<T> probs(bits.event_count(), T(0));
    std::vector<int> outcome_bits(bits.size());
    for (std::uint64_t j = 0; j < space.event_count(); ++j) {
        auto outcome = space.decode(j);
        for (std::size_t k = 0; k < outcome.size(); ++k) {
            outcome_bits[static_cast<std::size_t>(bits.position(left_bit(space.variables()[k])))] =
                outcome[k] / 2;
            outcome_bits[static_cast<std::size_t>(bits.position(right_bit(space.variables()[k])))] =
                outcome[k] % 2;
        }
        probs[bits.encode(outcome_bits)] = p.at(j);
    }
    return BasicDistribution<T>(std::move(bits), std::move(probs), 1e-10);
}

template <typename T>
BasicDistribution<T> product(const std::vector<BasicDistribution<T>>& factors) {
    std::vector<NodeId> vars;
    std::vector<int> cards;
    for (const auto& f : factors) {
        for (std::size_t k = 0; k < f.space().size(); ++k) {
            vars.push_back(f.space().variables()[k]);
            cards.push_back(f.space().cardinalities()[k]);
        }
    }
    EventSpace joint(vars, cards);
    std::vector<std::vector<int>> positions;
    for (const auto& f : factors) {
        std::vector<int> pos;
        for (const auto& v : f.space().variables()) pos.push_back(joint.position(v));
        positions.push_back(std::move(pos));
    }
    std::vector<T> probs(joint.event_count());
    std::vector<int> scratch;
    for (std::uint64_t j = 0; j < joint.event_count(); ++j) {
        T acc(1);
        for (std::size_t f = 0; f < factors.size(); ++f) {
            acc *= factors[f].at(project(joint, positions[f], factors[f].space(), j, scratch));
        }
        probs[j] = acc;
    }
    return BasicDistribution<T>(std::move(joint), std::move(probs), 1e-10);
}

Distribution uniform_distribution(const EventSpace& space) {
    std::vector<double> probs(space.event_count(), 1.0 / static_cast<double>(space.event_count()));
    return Distribution(space, std::move(probs), 1e-10);
}

template class BasicDistribution<double>;
template class BasicDistribution<QSqrt2>;
template Distribution marginalize(const Distribution&, const NodeSet&);
template ExactDistribution marginalize(const ExactDistribution&, const NodeSet&);
template Distribution bit_coarse_grain(const Distribution&);
template ExactDistribution bit_coarse_grain(const ExactDistribution&);
template Distribution product(const std::vector<Distribution>&);
template ExactDistribution product(const std::vector<ExactDistribution>&);

}  // namespace tricausal
