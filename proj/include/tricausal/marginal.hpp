#pragma once

#include "tricausal/events.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tricausal {

// A complete family of maximal contexts over the joint variables J.
class MarginalScenario {
public:
    MarginalScenario() = default;
    // Contexts keep their declared order; duplicates and contexts contained in
    // another context are dropped. Every context variable needs a cardinality.
    MarginalScenario(std::vector<NodeSet> contexts, const std::map<NodeId, int>& cardinalities);

    const std::vector<NodeSet>& contexts() const { return contexts_; }
    const EventSpace& joint() const { return joint_; }
    const EventSpace& context_space(std::size_t i) const { return context_spaces_[i]; }
    // Row offset of context i in the stacked marginal event list.
    std::uint64_t row_offset(std::size_t i) const { return offsets_[i]; }
    std::uint64_t row_count() const { return offsets_.back(); }
    // Which context a row belongs to, and the row as an event.
    std::size_t context_of_row(std::uint64_t row) const;
    Event row_event(std::uint64_t row) const;
    std::string row_label(std::uint64_t row) const;

    bool operator==(const MarginalScenario& o) const {
        return contexts_ == o.contexts_ && joint_ == o.joint_;
    }

private:
    std::vector<NodeSet> contexts_;
    EventSpace joint_;
    std::vector<EventSpace> context_spaces_;
    std::vector<std::uint64_t> offsets_;
};

// Per-context distributions; each is over exactly its context's variables.
class MarginalModel {
public:
    MarginalModel(MarginalScenario scenario, std::vector<Distribution> dists);
    static MarginalModel from_joint(const MarginalScenario& scenario, const Distribution& joint);

    const MarginalScenario& scenario() const { return scenario_; }
    const std::vector<Distribution>& dists() const { return dists_; }

private:
    MarginalScenario scenario_;
    std::vector<Distribution> dists_;
};

// Compressed sparse column matrix with small integer entries.
struct SparseIncidence {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    std::vector<std::uint64_t> col_ptr{0};
    std::vector<std::uint32_t> row_idx;
    std::vector<std::int32_t> values;

    std::uint64_t nonzeros() const { return row_idx.size(); }
    std::int64_t at(std::uint64_t r, std::uint64_t c) const;
    std::vector<double> multiply(const std::vector<double>& x) const;
    // Coordinate triplets "row col value", one per line, 0-based.
    std::string to_triplets() const;
};

// Restriction map from joint events to marginal rows, computed on the fly so
// that large incidence matrices can be streamed without being stored.
class IncidenceLayout {
public:
    explicit IncidenceLayout(const MarginalScenario& scenario);

    std::size_t context_count() const { return terms_.size(); }
    std::uint64_t joint_count() const { return joint_count_; }
    // rows[i] = the row of context i that joint event j restricts to.
    void rows_of(std::uint64_t j, std::uint32_t* rows) const;

private:
    std::uint64_t joint_count_ = 0;
    std::vector<int> cards_;
    // Per context: row offset and (joint position, stride) pairs.
    std::vector<std::uint64_t> offsets_;
    std::vector<std::vector<std::pair<int, std::uint64_t>>> terms_;
};

SparseIncidence incidence_matrix(const MarginalScenario& scenario);

// v_m = P[Dom(m)](m), stacked in the scenario's row order.
std::vector<double> marginal_vector(const MarginalModel& model, const MarginalScenario& scenario);

}  // namespace tricausal
