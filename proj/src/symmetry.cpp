#include "tricausal/symmetry.hpp"

#include "tricausal/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

namespace tricausal {

namespace {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

bool is_permutation_of(const Permutation& p, std::size_t n) {
    if (p.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

Permutation identity(std::size_t n) {
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i);
    return p;
}

std::vector<Permutation> closure(std::size_t n, const std::vector<Permutation>& gens) {
    std::set<Permutation> seen{identity(n)};
    std::deque<Permutation> queue{identity(n)};
    while (!queue.empty()) {
        Permutation cur = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            Permutation next = compose(g, cur);
            if (seen.insert(next).second) queue.push_back(std::move(next));
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<std::uint64_t> context_masks(const MarginalScenario& sc) {
    const auto& joint = sc.joint();
    std::vector<std::uint64_t> masks;
    for (const auto& ctx : sc.contexts()) {
        std::uint64_t m = 0;
        for (const auto& v : ctx) m |= std::uint64_t{1} << joint.position(v);
        masks.push_back(m);
    }
    return masks;
}

std::uint64_t image_mask(const Permutation& p, std::uint64_t mask) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (mask >> i & 1) out |= std::uint64_t{1} << p[i];
    }
    return out;
}

void check_group_matches(const MarginalScenario& sc, const PermGroup& g) {
    if (g.variables() != sc.joint().variables()) {
        throw InputError("group variables differ from the scenario's joint variables");
    }
}

// Joint-event action with precomputed strides.
struct JointAction {
    std::vector<int> cards;
    std::vector<std::uint64_t> strides;

    explicit JointAction(const EventSpace& space) : cards(space.cardinalities()) {
        strides.assign(cards.size(), 1);
        for (std::size_t i = cards.size(); i-- > 1;) strides[i - 1] = strides[i] * cards[i];
    }
    void decode(std::uint64_t j, int* digits) const {
        for (std::size_t i = cards.size(); i-- > 0;) {
            digits[i] = static_cast<int>(j % cards[i]);
            j /= cards[i];
        }
    }
    std::uint64_t apply(const Permutation& p, const int* digits) const {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < p.size(); ++i) out += digits[i] * strides[p[i]];
        return out;
    }
};

}  // namespace

Permutation compose(const Permutation& outer, const Permutation& inner) {
    Permutation out(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
    return out;
}

Permutation inverse(const Permutation& p) {
    Permutation out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
    return out;
}

PermGroup::PermGroup(std::vector<NodeId> variables, std::vector<Permutation> generators)
    : vars_(std::move(variables)), gens_(std::move(generators)) {
    for (const auto& g : gens_) {
        if (!is_permutation_of(g, vars_.size())) throw InputError("generator is not a permutation of the variables");
    }
    elems_ = closure(vars_.size(), gens_);
}

bool PermGroup::contains(const Permutation& p) const {
    return std::binary_search(elems_.begin(), elems_.end(), p);
}

Permutation PermGroup::from_map(const std::map<NodeId, NodeId>& images) const {
    Permutation p(vars_.size(), -1);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = images.find(vars_[i]);
        const NodeId& target = it == images.end() ? vars_[i] : it->second;
        auto pos = std::find(vars_.begin(), vars_.end(), target);
        if (pos == vars_.end()) throw InputError("permutation image " + target.str() + " is not a group variable");
        p[i] = static_cast<int>(pos - vars_.begin());
    }
    if (!is_permutation_of(p, vars_.size())) throw InputError("map is not a bijection");
    return p;
}

std::map<NodeId, NodeId> PermGroup::to_map(const Permutation& p) const {
    std::map<NodeId, NodeId> out;
    for (std::size_t i = 0; i < p.size(); ++i) out[vars_[i]] = vars_[p[i]];
    return out;
}

std::string PermGroup::cycles(const Permutation& p) const {
    std::ostringstream os;
    std::vector<char> done(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (done[i] || p[i] == static_cast<int>(i)) continue;
        os << '(';
        for (std::size_t k = i; !done[k]; k = p[k]) {
            if (k != i) os << ' ';
            os << vars_[k].str();
            done[k] = 1;
        }
        os << ')';
    }
    std::string s = os.str();
    return s.empty() ? "()" : s;
}

PermGroup stabilizer_group(const MarginalScenario& sc) {
    const auto& joint = sc.joint();
    const std::size_t n = joint.size();
    if (n > 63) throw InputError("too many joint variables for the stabilizer search");
    const auto masks = context_masks(sc);
    const std::set<std::uint64_t> mask_set(masks.begin(), masks.end());
    const auto& cards = joint.cardinalities();

    std::vector<Permutation> found;
    Permutation p(n, -1);
    std::uint64_t used = 0;
    // Image of the assigned part of each context must fit inside a context of
    // the same size.
    auto consistent = [&](std::size_t assigned) {
        const std::uint64_t done = assigned >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << assigned) - 1;
        for (auto m : masks) {
            std::uint64_t part = m & done;
            if (!part) continue;
            std::uint64_t img = 0;
            for (std::size_t i = 0; i < assigned; ++i) {
                if (part >> i & 1) img |= std::uint64_t{1} << p[i];
            }
            bool ok = false;
            for (auto d : masks) {
                if (__builtin_popcountll(d) == __builtin_popcountll(m) && (img & ~d) == 0) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
        return true;
    };
    auto search = [&](auto&& self, std::size_t k) -> void {
        if (k == n) {
            for (auto m : masks) {
                if (!mask_set.count(image_mask(p, m))) return;
            }
            found.push_back(p);
            return;
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (used >> t & 1 || cards[t] != cards[k]) continue;
            p[k] = static_cast<int>(t);
            used |= std::uint64_t{1} << t;
            if (consistent(k + 1)) self(self, k + 1);
            used &= ~(std::uint64_t{1} << t);
        }
        p[k] = -1;
    };
    search(search, 0);
    std::sort(found.begin(), found.end());

    // Greedy generating set in lexicographic order.
    std::vector<Permutation> gens;
    std::set<Permutation> generated{identity(n)};
    for (const auto& g : found) {
        if (generated.count(g)) continue;
        gens.push_back(g);
        auto el = closure(n, gens);
        generated = {el.begin(), el.end()};
        if (generated.size() == found.size()) break;
    }
    PermGroup group(joint.variables(), gens);
    if (group.order() != found.size()) throw VerificationError("stabilizer search is not closed under composition");
    return group;
}

bool deflation_consistent(const PermGroup& inflated, const PermGroup& original) {
    std::set<Permutation> images;
    const auto& vars = inflated.variables();
    for (const auto& p : inflated.elements()) {
        std::map<NodeId, NodeId> base;
        for (std::size_t i = 0; i < p.size(); ++i) {
            NodeId from = vars[i].stripped();
            NodeId to = vars[p[i]].stripped();
            auto [it, inserted] = base.emplace(from, to);
            if (!inserted && it->second != to) return false;
        }
        try {
            images.insert(original.from_map(base));
        } catch (const InputError&) {
            return false;
        }
    }
    return images == std::set<Permutation>(original.elements().begin(), original.elements().end());
}

std::uint64_t act_on_row(const MarginalScenario& sc, const Permutation& p, std::uint64_t row) {
    const auto& joint = sc.joint();
    Event e = sc.row_event(row);
    std::map<NodeId, int> moved;
    for (const auto& [v, val] : e.assignment()) moved[joint.variables()[p[joint.position(v)]]] = val;
    NodeSet dom;
    for (const auto& kv : moved) dom.insert(kv.first);
    const auto& ctxs = sc.contexts();
    auto it = std::find(ctxs.begin(), ctxs.end(), dom);
    if (it == ctxs.end()) throw InputError("permutation does not map contexts to contexts");
    std::size_t c = it - ctxs.begin();
    const auto& space = sc.context_space(c);
    std::vector<int> outcomes;
    for (const auto& v : space.variables()) outcomes.push_back(moved.at(v));
    return sc.row_offset(c) + space.encode(outcomes);
}

std::uint64_t act_on_joint(const MarginalScenario& sc, const Permutation& p, std::uint64_t j) {
    JointAction act(sc.joint());
    std::vector<int> digits(p.size());
    act.decode(j, digits.data());
    return act.apply(p, digits.data());
}

SymmetricIncidence symmetric_incidence(const MarginalScenario& sc, const PermGroup& g) {
    check_group_matches(sc, g);
    SymmetricIncidence out;
    const auto& elems = g.elements();

    // Marginal-row orbits.
    const std::uint64_t rows = sc.row_count();
    out.row_orbit.assign(rows, kUnassigned);
    for (std::uint64_t r = 0; r < rows; ++r) {
        if (out.row_orbit[r] != kUnassigned) continue;
        const auto id = static_cast<std::uint32_t>(out.row_rep.size());
        out.row_rep.push_back(r);
        for (const auto& p : elems) out.row_orbit[act_on_row(sc, p, r)] = id;
    }

    // Joint-event orbits.
    const std::uint64_t n_joint = sc.joint().event_count();
    if (n_joint >= kUnassigned) throw InputError("joint event space too large for orbit enumeration");
    JointAction act(sc.joint());
    out.joint_orbit.assign(n_joint, kUnassigned);
    std::vector<int> digits(sc.joint().size());
    for (std::uint64_t j = 0; j < n_joint; ++j) {
        if (out.joint_orbit[j] != kUnassigned) continue;
        const auto id = static_cast<std::uint32_t>(out.column_rep.size());
        out.column_rep.push_back(j);
        act.decode(j, digits.data());
        std::uint32_t size = 0;
        for (const auto& p : elems) {
            auto& slot = out.joint_orbit[act.apply(p, digits.data())];
            if (slot != id) {
                slot = id;
                ++size;
            }
        }
        out.column_orbit_size.push_back(size);
    }

    // Representative-column contraction.
    IncidenceLayout layout(sc);
    auto& m = out.matrix;
    m.rows = out.row_rep.size();
    m.cols = out.column_rep.size();
    m.col_ptr.assign(1, 0);
    std::vector<std::uint32_t> r(layout.context_count());
    for (auto rep : out.column_rep) {
        layout.rows_of(rep, r.data());
        for (auto& x : r) x = out.row_orbit[x];
        std::sort(r.begin(), r.end());
        for (std::size_t k = 0; k < r.size();) {
            std::size_t e = k;
            while (e < r.size() && r[e] == r[k]) ++e;
            m.row_idx.push_back(r[k]);
            m.values.push_back(static_cast<std::int32_t>(e - k));
            k = e;
        }
        m.col_ptr.push_back(m.row_idx.size());
    }
    return out;
}

std::vector<double> symmetric_marginal_vector(const SymmetricIncidence& s, const std::vector<double>& v_marg) {
    if (v_marg.size() != s.row_orbit.size()) throw InputError("marginal vector length differs from row count");
    std::vector<double> out(s.row_rep.size(), 0.0);
    for (std::size_t i = 0; i < v_marg.size(); ++i) out[s.row_orbit[i]] += v_marg[i];
    return out;
}

std::vector<double> symmetric_joint_vector(const SymmetricIncidence& s, const std::vector<double>& v_joint) {
    if (v_joint.size() != s.joint_orbit.size()) throw InputError("joint vector length differs from event count");
    std::vector<double> out(s.column_rep.size(), 0.0);
    for (std::size_t i = 0; i < v_joint.size(); ++i) out[s.joint_orbit[i]] += v_joint[i];
    return out;
}

std::optional<VerifiedCertificate> expand_and_certify(const SymmetricIncidence& s, const MarginalScenario& sc,
                                                      const VerifiedCertificate& y_sym,
                                                      const std::vector<double>& v_marg, double margin) {
    const auto& ys = y_sym.coefficients();
    if (ys.size() != s.row_rep.size()) throw InputError("symmetric certificate length differs from orbit count");
    if (s.row_orbit.size() != sc.row_count()) throw InputError("orbit data does not belong to this scenario");
    std::vector<std::int64_t> y(s.row_orbit.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = ys[s.row_orbit[i]];
    IncidenceLayout layout(sc);
    std::vector<std::uint32_t> rows(layout.context_count());
    auto column = [&](std::uint64_t j) {
        layout.rows_of(j, rows.data());
        __int128 acc = 0;
        for (auto r : rows) acc += y[r];
        return acc;
    };
    std::vector<std::int64_t> copy = y;
    return certify_columns(std::move(copy), layout.joint_count(), column, v_marg, margin);
}

}  // namespace tricausal
