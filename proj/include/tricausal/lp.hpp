#pragma once

#include "tricausal/marginal.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace tricausal {

// Does some x >= 0 satisfy matrix * x = rhs?
struct FeasibilityProblem {
    SparseIncidence matrix;
    std::vector<double> rhs;
};

enum class Pricing {
    Automatic,  // Devex when a full column scan is cheap next to a pivot, else partial
    Devex,      // Devex reference weights over all columns
    Partial,    // Dantzig over cyclic column segments
};

struct LpOptions {
    double feasibility_tol = 1e-8;     // max |Mx - rhs| accepted for a witness
    double certificate_margin = 1e-9;  // y.rhs must be below -margin * max|y|
    double optimality_tol = 1e-9;      // reduced-cost tolerance in phase one
    std::uint64_t max_iterations = 0;  // 0 picks a size-based default
    int refactor_interval = 0;         // 0 picks a size-based default
    Pricing pricing = Pricing::Automatic;
};

// An integer vector y with y^T M >= 0 checked exactly and y.rhs < 0. Only
// produced by the certify functions below.
class VerifiedCertificate {
public:
    const std::vector<std::int64_t>& coefficients() const { return y_; }
    // y.rhs / max|y|; strictly negative.
    double normalized_value() const { return value_; }
    std::size_t size() const { return y_.size(); }

private:
    friend std::optional<VerifiedCertificate> certify(std::vector<std::int64_t>, const SparseIncidence&,
                                                      std::span<const double>, double);
    friend std::optional<VerifiedCertificate> certify_columns(
        std::vector<std::int64_t>, std::uint64_t, const std::function<__int128(std::uint64_t)>&,
        std::span<const double>, double);
    VerifiedCertificate(std::vector<std::int64_t> y, double value) : y_(std::move(y)), value_(value) {}

    std::vector<std::int64_t> y_;
    double value_ = 0.0;
};

struct Feasible {
    std::vector<double> witness;  // one entry per column, nonnegative
    double residual = 0.0;        // max |M x - rhs|
};

struct Infeasible {
    VerifiedCertificate certificate;
    double phase_one_objective = 0.0;
};

using FeasibilityResult = std::variant<Feasible, Infeasible>;

struct LpStats {
    std::uint64_t iterations = 0;
    std::uint64_t refactorizations = 0;
    std::uint64_t reduced_rows = 0;
    std::uint64_t reduced_cols = 0;
};

// Phase-one primal simplex. Throws IndeterminateError when neither a witness
// within feasibility_tol nor an exactly verified certificate is obtained.
FeasibilityResult solve_feasibility(const FeasibilityProblem& problem, const LpOptions& options = {},
                                    LpStats* stats = nullptr);

enum class CertificateCheck {
    Valid,           // y^T M >= 0 exactly after snapping and y.rhs < 0
    NotCertificate,  // y^T M >= 0 holds but y.rhs is not negative
    SnappingFailed,  // the snapped y violates y^T M >= 0
};

// Solver-independent check: snaps y to nearby rationals (continued fractions,
// denominators up to 1e6), clears denominators and tests y^T M >= 0 exactly.
CertificateCheck verify_certificate(std::span<const double> y, const SparseIncidence& m,
                                    std::span<const double> rhs, double margin = 1e-9);

std::optional<VerifiedCertificate> certify(std::vector<std::int64_t> y, const SparseIncidence& m,
                                           std::span<const double> rhs, double margin = 1e-9);
// Same check for matrices that are only available column by column:
// column_value(j) must return y^T M_j exactly.
std::optional<VerifiedCertificate> certify_columns(
    std::vector<std::int64_t> y, std::uint64_t cols,
    const std::function<__int128(std::uint64_t)>& column_value, std::span<const double> rhs,
    double margin = 1e-9);

// Rational approximation p/q of x with q <= max_den (best approximation).
std::pair<std::int64_t, std::int64_t> snap_rational(double x, std::int64_t max_den);
// Scales y by 1/max|y|, snaps each entry, clears denominators and divides by
// the gcd. Falls back to fixed-point rounding when the common denominator
// exceeds 2^40.
std::vector<std::int64_t> snap_to_integers(std::span<const double> y);

}  // namespace tricausal
