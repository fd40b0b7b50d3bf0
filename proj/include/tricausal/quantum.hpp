#pragma once

#include "tricausal/events.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace tricausal {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Angles lambda(i, j), 0-based. i < j is a plane rotation angle in
// [0, pi/2]; i > j is a phase on basis vector i in [0, 2 pi]; i == j is a
// global phase of column i, fixed to 0 by default.
class UnitaryParams {
public:
    explicit UnitaryParams(int d = 2) : d_(d), lambda_(static_cast<std::size_t>(d) * d, 0.0) {}

    int dimension() const { return d_; }
    double& operator()(int i, int j) { return lambda_[static_cast<std::size_t>(i) * d_ + j]; }
    double operator()(int i, int j) const { return lambda_[static_cast<std::size_t>(i) * d_ + j]; }

    // Off-diagonal angles as (phase lambda(n,m), rotation lambda(m,n)) pairs,
    // m < n in lexicographic order; d(d-1) values.
    std::vector<double> packed() const;
    static UnitaryParams unpack(int d, const std::vector<double>& values);
    // Phases reduced mod 2 pi, rotations folded into [0, pi/2] by a
    // continuous triangle wave.
    UnitaryParams wrapped() const;

private:
    int d_;
    std::vector<double> lambda_;
};

// Closed-form single factors: exp(i lambda sigma_{m,n}) for m < n with
// sigma_{m,n} = -i|m><n| + i|n><m|, and exp(i lambda P_n) with P_n = |n><n|.
CMatrix rotation_factor(int d, int m, int n, double lambda);
CMatrix phase_factor(int d, int n, double lambda);

// U = prod_m prod_{n>m} exp(i P_n l(n,m)) exp(i sigma_{m,n} l(m,n)) * prod_l exp(i P_l l(l,l)).
CMatrix spengler_unitary(const UnitaryParams& p);
// Parameters reproducing v up to column phases (diagonal angles are 0).
UnitaryParams unitary_params_from_matrix(const CMatrix& v);

// p_1 = cos^2 t_1, p_j = cos^2 t_j prod_{k<j} sin^2 t_k, p_d = prod_k sin^2 t_k.
std::vector<double> hyperspherical_weights(const std::vector<double>& angles);
// rho = sum_j p_j U|j><j|U^dagger.
CMatrix density_from_params(const std::vector<double>& angles, const UnitaryParams& u);
// Rank-one projectors U|j><j|U^dagger, j = 0..d-1.
std::vector<CMatrix> pvm_from_params(const UnitaryParams& u);

// Three two-qubit edge states and three rank-one four-outcome measurements.
// States act on (A_Y,B_Y), (B_Z,C_Z), (C_X,A_X); measurements on (A_Y,A_X),
// (B_Y,B_Z), (C_Z,C_X). Measurement vector k of a party is outcome k.
struct QuantumStrategy {
    std::array<CMatrix, 3> states;                    // rho_AB, rho_BC, rho_CA
    std::array<std::array<CVector, 4>, 3> measurements;  // A, B, C
    // tau[k] = state-order qubit position of measurement-order qubit k.
    std::array<int, 6> tau{0, 5, 1, 2, 3, 4};

    // Throws VerificationError when a state or measurement invariant fails.
    void validate(double state_tol = 1e-12, double pvm_tol = 1e-10) const;
};

Distribution triangle_distribution(const QuantumStrategy& s);

// Parameter vector layout (81 entries):
//   [0, 9)    eigen-angles, 3 per state (AB, BC, CA)
//   [9, 45)   state unitary packed params, 12 per state
//   [45, 81)  measurement unitary packed params, 12 per party (A, B, C)
constexpr std::size_t kStrategyParams = 81;
QuantumStrategy strategy_from_params(const std::vector<double>& x);
// Folds every entry into its range.
std::vector<double> wrap_strategy_params(const std::vector<double>& x);

QuantumStrategy fritz_strategy();
std::vector<double> fritz_strategy_params();

}  // namespace tricausal
