#pragma once

#include "tricausal/lp.hpp"
#include "tricausal/marginal.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tricausal {

// perm[i] is the index of the image of variable i.
using Permutation = std::vector<int>;

// A permutation group on a fixed ordered variable list, stored with all its
// elements (the groups here have at most a few hundred elements).
class PermGroup {
public:
    PermGroup() = default;
    // Closes the generators under composition.
    PermGroup(std::vector<NodeId> variables, std::vector<Permutation> generators);

    const std::vector<NodeId>& variables() const { return vars_; }
    const std::vector<Permutation>& generators() const { return gens_; }
    const std::vector<Permutation>& elements() const { return elems_; }
    std::size_t order() const { return elems_.size(); }
    bool contains(const Permutation& p) const;

    Permutation from_map(const std::map<NodeId, NodeId>& images) const;
    std::map<NodeId, NodeId> to_map(const Permutation& p) const;
    // "(A_1 A_4)(B_1 B_4)..."; "()" for the identity.
    std::string cycles(const Permutation& p) const;

private:
    std::vector<NodeId> vars_;
    std::vector<Permutation> gens_;
    std::vector<Permutation> elems_;  // sorted
};

Permutation compose(const Permutation& outer, const Permutation& inner);
Permutation inverse(const Permutation& p);

// All permutations of the joint variables that map contexts to contexts and
// preserve cardinalities, with a small generating set.
PermGroup stabilizer_group(const MarginalScenario& sc);

// True iff stripping copy-indices sends every element of `inflated` to a
// well-defined permutation of base names and the image set equals `original`.
bool deflation_consistent(const PermGroup& inflated, const PermGroup& original);

// Orbit-contracted marginal problem. Column O' of the matrix holds, for one
// representative joint event j of O', the number of rows of each marginal
// orbit that j restricts to; so M_sym * (orbit sums of v_J) = orbit sums of
// M * v_J for every joint vector v_J.
struct SymmetricIncidence {
    SparseIncidence matrix;
    std::vector<std::uint32_t> row_orbit;         // per marginal row
    std::vector<std::uint64_t> row_rep;           // least row of each marginal orbit
    std::vector<std::uint32_t> joint_orbit;       // per joint event
    std::vector<std::uint64_t> column_rep;        // least joint event of each orbit
    std::vector<std::uint32_t> column_orbit_size;
};

SymmetricIncidence symmetric_incidence(const MarginalScenario& sc, const PermGroup& g);

std::vector<double> symmetric_marginal_vector(const SymmetricIncidence& s, const std::vector<double>& v_marg);
std::vector<double> symmetric_joint_vector(const SymmetricIncidence& s, const std::vector<double>& v_joint);

// y_m = y_sym[orbit(m)], then checks y^T M >= 0 over every joint event of the
// unsymmetrized scenario without materializing M.
std::optional<VerifiedCertificate> expand_and_certify(const SymmetricIncidence& s, const MarginalScenario& sc,
                                                      const VerifiedCertificate& y_sym,
                                                      const std::vector<double>& v_marg, double margin = 1e-9);

// Image of a marginal row / joint event under a permutation of the joint
// variables, with (phi[f])(phi(v)) = f(v).
std::uint64_t act_on_row(const MarginalScenario& sc, const Permutation& p, std::uint64_t row);
std::uint64_t act_on_joint(const MarginalScenario& sc, const Permutation& p, std::uint64_t j);

}  // namespace tricausal
