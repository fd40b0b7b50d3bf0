#pragma once

#include "tricausal/events.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace tricausal {

// One marginal probability P[vars](outcomes); vars sorted, no duplicates.
struct Factor {
    std::vector<NodeId> vars;
    std::vector<int> outcomes;

    auto operator<=>(const Factor&) const = default;
    bool operator==(const Factor&) const = default;
};

struct Term {
    Rational coefficient;
    std::vector<Factor> factors;  // sorted; the empty product is the constant 1
};

// sum_t coefficient_t * prod_f P[f] >= 0, kept in canonical form: factors
// sorted inside a term, terms sorted by monomial, equal monomials merged and
// zero terms removed.
class PolynomialInequality {
public:
    PolynomialInequality() = default;
    explicit PolynomialInequality(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t degree() const;
    NodeSet variables() const;

    PolynomialInequality negated() const;
    // Renames variables. A bit variable "A_l" follows its parent when only "A"
    // is in the map.
    PolynomialInequality relabeled(const std::map<NodeId, NodeId>& rename) const;

    bool operator==(const PolynomialInequality& o) const;

private:
    std::vector<Term> terms_;
};

// Evaluates on p. Factors over A_l, A_r, ... are read from the bit
// coarse-graining of p when p itself does not carry those variables.
template <typename T>
T evaluate(const PolynomialInequality& ineq, const BasicDistribution<T>& p);

// The Wagon-Wheel inequality over bit variables, stored in the >= 0 form
// (the negation of its published <= 0 form).
PolynomialInequality wagon_wheel_inequality();

// Distributions over A, B, C with 4 outcomes each.
ExactDistribution fritz_distribution();
ExactDistribution uniform_abc();
// Classical Triangle model: sources X, Y, Z with `latent_cardinality` values
// and random weights, responses P(a|x,y), P(b|y,z), P(c|z,x) that are random
// points of the simplex or, if `deterministic`, random functions.
Distribution random_triangle_distribution(std::mt19937_64& rng, int latent_cardinality, bool deterministic);

// <A_r B_r | C=00> + <..|C=01> + <..|C=10> - <..|C=11>. Only a compatibility
// test when C is perfectly correlated with A_l, B_l; callers check that.
template <typename T>
T chsh_triangle(const BasicDistribution<T>& p);
// True when C_l = A_l and C_r = B_l with probability one.
bool c_tracks_left_bits(const Distribution& p, double tol = 1e-12);

struct NoisyFamily {
    ExactDistribution base;
    ExactDistribution mixer;
};

NoisyFamily fritz_noisy_family();
// (1 - eps) * base + eps * mixer; exact for rational eps.
ExactDistribution noisy_member(const NoisyFamily& f, const Rational& eps);
Distribution noisy_member(const NoisyFamily& f, double eps);

struct NoiseThreshold {
    double epsilon = 0.0;        // first eps where the value stops being negative
    double lower = 0.0;          // bracket after bisection
    double upper = 0.0;
    bool violated_at_one = false;  // still violated by the mixer itself
    bool non_monotone = false;     // sign returned negative after the crossing
};

// Scans a grid of `grid` steps over [0, 1] for the first sign change, then
// bisects that bracket to `tol`.
NoiseThreshold noise_threshold(const PolynomialInequality& ineq, const NoisyFamily& f, double tol = 1e-6,
                               int grid = 1000);

}  // namespace tricausal
