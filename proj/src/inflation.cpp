#include "tricausal/inflation.hpp"

#include "tricausal/errors.hpp"
#include "tricausal/structures.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <set>
#include <unordered_set>

namespace tricausal {

Inflation Inflation::create(CausalStructure original, CausalStructure inflated) {
    for (const auto& n : inflated.nodes()) {
        NodeId base = n.stripped();
        if (!original.contains(base)) throw InputError("inflated node " + n.str() + " has no original");
        if (original.role(base) != inflated.role(n)) throw InputError("role mismatch at " + n.str());
        if (original.cardinality(base) != inflated.cardinality(n)) {
            throw InputError("cardinality mismatch at " + n.str());
        }
        auto pa = inflated.parents(n);
        if (strip_copy_indices(pa) != original.parents(base) || strip_copy_indices(pa).size() != pa.size()) {
            throw InputError("parents of " + n.str() + " do not strip to the parents of " + base.str());
        }
    }
    return Inflation(std::move(original), std::move(inflated));
}

Inflation builtin_inflation(const std::string& name, int cardinality) {
    if (name == "spiral") return Inflation::create(triangle_structure(cardinality), spiral_graph(cardinality));
    if (name == "wagon-wheel") {
        return Inflation::create(triangle_structure(cardinality), wagon_wheel_graph(cardinality));
    }
    if (name == "web") return Inflation::create(triangle_structure(cardinality), web_graph(cardinality));
    throw InputError("unknown built-in inflation '" + name + "'");
}

Inflation inflation_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        const auto& orig = doc.at("original");
        CausalStructure original =
            orig.is_string() ? builtin_structure(orig.get<std::string>()) : structure_from_json(orig.dump());
        return Inflation::create(std::move(original), structure_from_json(doc.at("inflated").dump()));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("inflation file: ") + e.what());
    }
}

bool ancestrally_independent(const CausalStructure& g, const NodeSet& n1, const NodeSet& n2) {
    auto a1 = g.ancestors(n1);
    auto a2 = g.ancestors(n2);
    for (const auto& v : a1) {
        if (a2.count(v)) return false;
    }
    return true;
}

bool is_injectable(const Inflation& inf, const NodeSet& ns) {
    if (ns.empty()) return true;
    auto image = strip_copy_indices(ns);
    if (image.size() != ns.size()) return false;
    return graphs_copy_equivalent(inf.inflated().ancestral_subgraph(ns), inf.original().ancestral_subgraph(image));
}

namespace {

using Mask = std::uint32_t;

struct ObservableIndex {
    std::vector<NodeId> nodes;
    std::vector<NodeSet> ancestors;

    explicit ObservableIndex(const CausalStructure& g) {
        for (const auto& n : g.observable()) {
            nodes.push_back(n);
            ancestors.push_back(g.ancestors({n}));
        }
        if (nodes.size() > 24) throw InputError("too many observable nodes for subset enumeration");
    }

    NodeSet members(Mask m) const {
        NodeSet out;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (m & (Mask{1} << i)) out.insert(nodes[i]);
        }
        return out;
    }
};

bool is_maximal(Mask m, const std::vector<Mask>& all) {
    for (Mask o : all) {
        if (o != m && (o & m) == m) return false;
    }
    return true;
}

std::vector<Mask> injectable_masks(const Inflation& inf, const ObservableIndex& idx) {
    std::vector<Mask> found;
    std::vector<Mask> frontier;
    for (std::size_t i = 0; i < idx.nodes.size(); ++i) {
        Mask m = Mask{1} << i;
        if (is_injectable(inf, idx.members(m))) frontier.push_back(m);
    }
    // Injectability is inherited by subsets, so growing by higher-indexed
    // nodes from injectable sets reaches every injectable set exactly once.
    while (!frontier.empty()) {
        found.insert(found.end(), frontier.begin(), frontier.end());
        std::vector<Mask> next;
        for (Mask m : frontier) {
            int top = 31 - std::countl_zero(m);
            for (std::size_t i = static_cast<std::size_t>(top) + 1; i < idx.nodes.size(); ++i) {
                Mask g = m | (Mask{1} << i);
                if (is_injectable(inf, idx.members(g))) next.push_back(g);
            }
        }
        frontier = std::move(next);
    }
    return found;
}

}  // namespace

std::vector<InjectableSet> injectable_sets(const Inflation& inf, bool maximal_only) {
    ObservableIndex idx(inf.inflated());
    auto masks = injectable_masks(inf, idx);
    std::vector<InjectableSet> out;
    for (Mask m : masks) {
        if (maximal_only && !is_maximal(m, masks)) continue;
        auto mem = idx.members(m);
        out.push_back({mem, strip_copy_indices(mem)});
    }
    std::sort(out.begin(), out.end(), [](const InjectableSet& a, const InjectableSet& b) {
        return std::vector<NodeId>(a.members.begin(), a.members.end()) <
               std::vector<NodeId>(b.members.begin(), b.members.end());
    });
    return out;
}

std::vector<AiExpressibleSet> ai_expressible_sets(const Inflation& inf, bool maximal_only) {
    ObservableIndex idx(inf.inflated());
    auto inj = injectable_masks(inf, idx);
    std::unordered_set<Mask> injectable(inj.begin(), inj.end());
    const std::size_t n = idx.nodes.size();

    // Pairwise ancestral overlap between observables.
    std::vector<Mask> overlaps(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            bool meet = std::any_of(idx.ancestors[i].begin(), idx.ancestors[i].end(),
                                    [&](const NodeId& v) { return idx.ancestors[k].count(v) != 0; });
            if (meet) overlaps[i] |= Mask{1} << k;
        }
    }

    std::vector<Mask> expressible;
    std::vector<std::vector<Mask>> partitions;
    for (Mask m = 1; m < (Mask{1} << n); ++m) {
        // Connected components of the overlap graph restricted to m.
        std::vector<Mask> comps;
        Mask left = m;
        bool ok = true;
        while (left && ok) {
            Mask comp = left & (~left + 1);
            Mask grown = comp;
            do {
                comp = grown;
                for (std::size_t i = 0; i < n; ++i) {
                    if (comp & (Mask{1} << i)) grown |= overlaps[i] & m;
                }
            } while (grown != comp);
            ok = injectable.count(comp) != 0;
            comps.push_back(comp);
            left &= ~comp;
        }
        if (!ok) continue;
        expressible.push_back(m);
        partitions.push_back(std::move(comps));
    }

    std::vector<AiExpressibleSet> out;
    for (std::size_t s = 0; s < expressible.size(); ++s) {
        if (maximal_only && !is_maximal(expressible[s], expressible)) continue;
        AiExpressibleSet a;
        a.members = idx.members(expressible[s]);
        for (Mask b : partitions[s]) a.blocks.push_back(idx.members(b));
        std::sort(a.blocks.begin(), a.blocks.end());
        out.push_back(std::move(a));
    }
    std::sort(out.begin(), out.end(), [](const AiExpressibleSet& a, const AiExpressibleSet& b) {
        return std::vector<NodeId>(a.members.begin(), a.members.end()) <
               std::vector<NodeId>(b.members.begin(), b.members.end());
    });
    return out;
}

namespace {

MarginalScenario make_scenario(const Inflation& inf, const std::vector<AiExpressibleSet>& sets) {
    std::vector<NodeSet> contexts;
    for (const auto& s : sets) contexts.push_back(s.members);
    return MarginalScenario(std::move(contexts), inf.inflated().cardinalities());
}

}  // namespace

InflatedScenario::InflatedScenario(Inflation inf)
    : inf_(std::move(inf)), sets_(ai_expressible_sets(inf_)), scenario_(make_scenario(inf_, sets_)) {
    if (scenario_.contexts().size() != sets_.size()) {
        throw VerificationError("maximal ai-expressible sets are not an antichain");
    }
}

std::vector<double> InflatedScenario::marginal_vector(const Distribution& p_obs) const {
    for (const auto& v : inf_.original().observable()) {
        if (!p_obs.space().contains(v) || p_obs.space().cardinality(v) != inf_.original().cardinality(v)) {
            throw InputError("distribution does not match the observables of the original structure");
        }
    }
    std::map<NodeSet, Distribution> cache;
    std::vector<double> v;
    v.reserve(scenario_.row_count());
    for (std::size_t c = 0; c < sets_.size(); ++c) {
        const auto& space = scenario_.context_space(c);
        struct BlockMap {
            const Distribution* dist;
            std::vector<int> positions;  // context positions of the block's members
        };
        std::vector<BlockMap> blocks;
        for (const auto& b : sets_[c].blocks) {
            auto image = strip_copy_indices(b);
            for (const auto& x : image) {
                if (!inf_.original().is_observable(x)) {
                    throw VerificationError("block image " + to_string(image) + " is not observable");
                }
            }
            auto it = cache.find(image);
            if (it == cache.end()) it = cache.emplace(image, marginalize(p_obs, image)).first;
            BlockMap bm{&it->second, {}};
            for (const auto& x : b) bm.positions.push_back(space.position(x));
            blocks.push_back(std::move(bm));
        }
        std::vector<int> sub;
        for (std::uint64_t e = 0; e < space.event_count(); ++e) {
            auto outcome = space.decode(e);
            double prob = 1.0;
            for (const auto& bm : blocks) {
                sub.clear();
                for (int pos : bm.positions) sub.push_back(outcome[static_cast<std::size_t>(pos)]);
                prob *= bm.dist->prob(sub);
            }
            v.push_back(prob);
        }
    }
    return v;
}

MarginalModel InflatedScenario::marginal_model(const Distribution& p_obs) const {
    auto v = marginal_vector(p_obs);
    std::vector<Distribution> dists;
    for (std::size_t c = 0; c < sets_.size(); ++c) {
        auto begin = v.begin() + static_cast<std::ptrdiff_t>(scenario_.row_offset(c));
        auto end = v.begin() + static_cast<std::ptrdiff_t>(scenario_.row_offset(c + 1));
        dists.emplace_back(scenario_.context_space(c), std::vector<double>(begin, end), 1e-10);
    }
    return MarginalModel(scenario_, std::move(dists));
}

std::vector<Factor> InflatedScenario::row_monomial(std::uint64_t row) const {
    auto c = scenario_.context_of_row(row);
    Event e = scenario_.row_event(row);
    std::vector<Factor> out;
    for (const auto& b : sets_[c].blocks) {
        Factor f;
        for (const auto& x : b) {
            f.vars.push_back(x.stripped());
            f.outcomes.push_back(e.at(x));
        }
        out.push_back(std::move(f));
    }
    return out;
}

MarginalModel inflated_marginal_model(const Distribution& p_obs, const Inflation& inf) {
    return InflatedScenario(inf).marginal_model(p_obs);
}

PolynomialInequality deflate_coefficients(const std::vector<std::int64_t>& y, const InflatedScenario& sc) {
    if (y.size() != sc.scenario().row_count()) throw InputError("certificate length differs from row count");
    std::vector<Term> terms;
    for (std::uint64_t m = 0; m < y.size(); ++m) {
        if (y[m] == 0) continue;
        terms.push_back({Rational(y[m]), sc.row_monomial(m)});
    }
    return PolynomialInequality(std::move(terms));
}

PolynomialInequality deflate_certificate(const VerifiedCertificate& y, const InflatedScenario& sc) {
    return deflate_coefficients(y.coefficients(), sc);
}

std::string certificate_to_text(const VerifiedCertificate& y, const MarginalScenario& sc) {
    if (y.size() != sc.row_count()) throw InputError("certificate length differs from row count");
    std::string out = "# marginal event, integer coefficient\n";
    for (std::uint64_t m = 0; m < y.size(); ++m) {
        auto c = y.coefficients()[m];
        if (c == 0) continue;
        out += sc.row_label(m) + " " + std::to_string(c) + "\n";
    }
    return out;
}

CompatibilityVerdict test_compatibility(const Distribution& p_obs, const InflatedScenario& sc,
                                        const LpOptions& options) {
    if (sc.scenario().joint().event_count() > (std::uint64_t{1} << 22)) {
        throw InputError("inflation too large for the unsymmetrized LP; use the symmetric pipeline");
    }
    FeasibilityProblem problem{incidence_matrix(sc.scenario()), sc.marginal_vector(p_obs)};
    auto result = solve_feasibility(problem, options);
    if (auto* f = std::get_if<Feasible>(&result)) return CompatibleAtInflation{std::move(f->witness), f->residual};
    auto& inf = std::get<Infeasible>(result);
    auto ineq = deflate_certificate(inf.certificate, sc);
    return Witnessed{std::move(ineq), std::move(inf.certificate)};
}

CompatibilityVerdict test_compatibility(const Distribution& p_obs, const Inflation& inf, const LpOptions& options) {
    return test_compatibility(p_obs, InflatedScenario(inf), options);
}

}  // namespace tricausal
