#include "tricausal/marginal.hpp"

#include <algorithm>
#include <sstream>

namespace tricausal {

MarginalScenario::MarginalScenario(std::vector<NodeSet> contexts,
                                   const std::map<NodeId, int>& cardinalities) {
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        if (contexts[i].empty()) throw InputError("marginal scenario: empty context");
        bool dominated = false;
        for (std::size_t k = 0; k < contexts.size() && !dominated; ++k) {
            if (k == i) continue;
            bool subset = std::includes(contexts[k].begin(), contexts[k].end(), contexts[i].begin(),
                                        contexts[i].end());
            // Equal contexts: keep the first occurrence only.
            if (subset && (contexts[k] != contexts[i] || k < i)) dominated = true;
        }
        if (!dominated) contexts_.push_back(contexts[i]);
    }
    std::map<NodeId, int> joint_cards;
    for (const auto& ctx : contexts_) {
        for (const auto& v : ctx) {
            auto it = cardinalities.find(v);
            if (it == cardinalities.end()) throw InputError("no cardinality for " + v.str());
            joint_cards[v] = it->second;
        }
    }
    joint_ = EventSpace::from_map(joint_cards);
    offsets_.push_back(0);
    for (const auto& ctx : contexts_) {
        context_spaces_.push_back(joint_.subspace(ctx));
        offsets_.push_back(offsets_.back() + context_spaces_.back().event_count());
    }
}

std::size_t MarginalScenario::context_of_row(std::uint64_t row) const {
    if (row >= row_count()) throw InputError("row out of range");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), row);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

Event MarginalScenario::row_event(std::uint64_t row) const {
    auto c = context_of_row(row);
    return Event(context_spaces_[c], row - offsets_[c]);
}

std::string MarginalScenario::row_label(std::uint64_t row) const {
    auto c = context_of_row(row);
    const auto& space = context_spaces_[c];
    auto outcome = space.decode(row - offsets_[c]);
    std::string vars, values;
    for (std::size_t k = 0; k < outcome.size(); ++k) {
        if (k) {
            vars += ",";
            values += ",";
        }
        vars += space.variables()[k].str();
        values += std::to_string(outcome[k]);
    }
    return "P[" + vars + "](" + values + ")";
}

MarginalModel::MarginalModel(MarginalScenario scenario, std::vector<Distribution> dists)
    : scenario_(std::move(scenario)), dists_(std::move(dists)) {
    if (dists_.size() != scenario_.contexts().size()) {
        throw InputError("marginal model needs one distribution per context");
    }
    for (std::size_t i = 0; i < dists_.size(); ++i) {
        if (!(dists_[i].space() == scenario_.context_space(i))) {
            throw InputError("marginal model: distribution " + std::to_string(i) +
                             " is not over its context " + to_string(scenario_.contexts()[i]));
        }
    }
}

MarginalModel MarginalModel::from_joint(const MarginalScenario& scenario, const Distribution& joint) {
    std::vector<Distribution> dists;
    for (const auto& ctx : scenario.contexts()) dists.push_back(marginalize(joint, ctx));
    return MarginalModel(scenario, std::move(dists));
}

std::int64_t SparseIncidence::at(std::uint64_t r, std::uint64_t c) const {
    for (auto k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
        if (row_idx[k] == r) return values[k];
    }
    return 0;
}

std::vector<double> SparseIncidence::multiply(const std::vector<double>& x) const {
    if (x.size() != cols) throw InputError("incidence multiply: dimension mismatch");
    std::vector<double> out(rows, 0.0);
    for (std::uint64_t c = 0; c < cols; ++c) {
        if (x[c] == 0.0) continue;
        for (auto k = col_ptr[c]; k < col_ptr[c + 1]; ++k) out[row_idx[k]] += values[k] * x[c];
    }
    return out;
}

std::string SparseIncidence::to_triplets() const {
    std::ostringstream os;
    os << "# rows " << rows << " cols " << cols << " nonzeros " << nonzeros() << "\n";
    for (std::uint64_t c = 0; c < cols; ++c) {
        for (auto k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
            os << row_idx[k] << " " << c << " " << values[k] << "\n";
        }
    }
    return os.str();
}

IncidenceLayout::IncidenceLayout(const MarginalScenario& scenario)
    : joint_count_(scenario.joint().event_count()), cards_(scenario.joint().cardinalities()) {
    const auto& joint = scenario.joint();
    for (std::size_t i = 0; i < scenario.contexts().size(); ++i) {
        const auto& space = scenario.context_space(i);
        std::vector<std::pair<int, std::uint64_t>> t;
        std::uint64_t stride = 1;
        for (std::size_t k = space.size(); k-- > 0;) {
            t.emplace_back(joint.position(space.variables()[k]), stride);
            stride *= static_cast<std::uint64_t>(space.cardinalities()[k]);
        }
        offsets_.push_back(scenario.row_offset(i));
        terms_.push_back(std::move(t));
    }
}

void IncidenceLayout::rows_of(std::uint64_t j, std::uint32_t* rows) const {
    int digits[64];
    for (std::size_t k = cards_.size(); k-- > 0;) {
        auto c = static_cast<std::uint64_t>(cards_[k]);
        digits[k] = static_cast<int>(j % c);
        j /= c;
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        std::uint64_t r = offsets_[i];
        for (const auto& [pos, stride] : terms_[i]) r += stride * static_cast<std::uint64_t>(digits[pos]);
        rows[i] = static_cast<std::uint32_t>(r);
    }
}

SparseIncidence incidence_matrix(const MarginalScenario& scenario) {
    if (scenario.joint().size() > 64) throw InputError("too many joint variables");
    IncidenceLayout layout(scenario);
    SparseIncidence m;
    m.rows = scenario.row_count();
    m.cols = scenario.joint().event_count();
    const std::size_t k = layout.context_count();
    m.col_ptr.resize(m.cols + 1);
    m.row_idx.resize(m.cols * k);
    m.values.assign(m.cols * k, 1);
    for (std::uint64_t j = 0; j < m.cols; ++j) {
        m.col_ptr[j] = j * k;
        layout.rows_of(j, m.row_idx.data() + j * k);
        std::sort(m.row_idx.begin() + static_cast<std::ptrdiff_t>(j * k),
                  m.row_idx.begin() + static_cast<std::ptrdiff_t>((j + 1) * k));
    }
    m.col_ptr[m.cols] = m.cols * k;
    return m;
}

std::vector<double> marginal_vector(const MarginalModel& model, const MarginalScenario& scenario) {
    if (!(model.scenario() == scenario)) {
        throw InputError("marginal model does not match the scenario's row ordering");
    }
    std::vector<double> v;
    v.reserve(scenario.row_count());
    for (const auto& d : model.dists()) v.insert(v.end(), d.probs().begin(), d.probs().end());
    return v;
}

}  // namespace tricausal
