#pragma once

#include "tricausal/causal_graph.hpp"
#include "tricausal/inequality.hpp"
#include "tricausal/lp.hpp"
#include "tricausal/marginal.hpp"

#include <string>
#include <variant>
#include <vector>

namespace tricausal {

// An inflated structure over copies of the original's nodes.
class Inflation {
public:
    // Checks that every inflated node's base exists in the original with the
    // same role and cardinality, and that its parents strip to the original
    // node's parents one-to-one.
    static Inflation create(CausalStructure original, CausalStructure inflated);

    const CausalStructure& original() const { return original_; }
    const CausalStructure& inflated() const { return inflated_; }

private:
    Inflation(CausalStructure o, CausalStructure i) : original_(std::move(o)), inflated_(std::move(i)) {}
    CausalStructure original_;
    CausalStructure inflated_;
};

// "spiral", "wagon-wheel", "web", all over the triangle.
Inflation builtin_inflation(const std::string& name, int cardinality = 4);
// {"original": "triangle" | <structure document>, "inflated": <structure document>}
Inflation inflation_from_json(const std::string& text);

bool ancestrally_independent(const CausalStructure& g, const NodeSet& n1, const NodeSet& n2);

// Copy-stripping is injective on An(ns) and AnSub(ns) matches the original's
// ancestral subgraph of the stripped set.
bool is_injectable(const Inflation& inf, const NodeSet& ns);

struct InjectableSet {
    NodeSet members;
    NodeSet image;
};

// Injectable sets of observable nodes, grown breadth-first from singletons.
std::vector<InjectableSet> injectable_sets(const Inflation& inf, bool maximal_only = true);

struct AiExpressibleSet {
    NodeSet members;
    std::vector<NodeSet> blocks;  // pairwise ancestrally independent, each injectable
};

// Sets of observable nodes whose finest ancestral-independence partition has
// injectable blocks. Sorted by member list.
std::vector<AiExpressibleSet> ai_expressible_sets(const Inflation& inf, bool maximal_only = true);

// The inflated marginal scenario: one context per maximal ai-expressible set.
class InflatedScenario {
public:
    explicit InflatedScenario(Inflation inf);

    const Inflation& inflation() const { return inf_; }
    const std::vector<AiExpressibleSet>& sets() const { return sets_; }
    const MarginalScenario& scenario() const { return scenario_; }

    // v_m = prod over blocks of P[image(block)] at the copy-stripped event.
    std::vector<double> marginal_vector(const Distribution& p_obs) const;
    MarginalModel marginal_model(const Distribution& p_obs) const;
    // The monomial that row m deflates to.
    std::vector<Factor> row_monomial(std::uint64_t row) const;

private:
    Inflation inf_;
    std::vector<AiExpressibleSet> sets_;
    MarginalScenario scenario_;
};

MarginalModel inflated_marginal_model(const Distribution& p_obs, const Inflation& inf);

// sum_m y_m * prod_blocks P[image](event) >= 0 over the original observables.
PolynomialInequality deflate_certificate(const VerifiedCertificate& y, const InflatedScenario& sc);
PolynomialInequality deflate_coefficients(const std::vector<std::int64_t>& y, const InflatedScenario& sc);

// "label coefficient" per nonzero row.
std::string certificate_to_text(const VerifiedCertificate& y, const MarginalScenario& sc);

struct CompatibleAtInflation {
    std::vector<double> witness;
    double residual = 0.0;
};

struct Witnessed {
    PolynomialInequality inequality;
    VerifiedCertificate certificate;
};

using CompatibilityVerdict = std::variant<CompatibleAtInflation, Witnessed>;

CompatibilityVerdict test_compatibility(const Distribution& p_obs, const InflatedScenario& sc,
                                        const LpOptions& options = {});
CompatibilityVerdict test_compatibility(const Distribution& p_obs, const Inflation& inf,
                                        const LpOptions& options = {});

}  // namespace tricausal
