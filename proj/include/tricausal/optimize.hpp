#pragma once

#include "tricausal/inequality.hpp"
#include "tricausal/quantum.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tricausal {

using Objective = std::function<double(const std::vector<double>&)>;

struct LocalOptions {
    std::uint64_t max_evaluations = 20000;  // the start point is always evaluated
    double xtol = 1e-8;          // Nelder-Mead simplex diameter
    double ftol = 1e-12;         // Nelder-Mead value spread
    double initial_step = 0.1;   // Nelder-Mead simplex edge
    double fd_step = 1e-6;       // central-difference step
    double gtol = 1e-8;          // BFGS max-norm of the gradient
    unsigned workers = 1;        // threads for finite-difference gradients
};

enum class OptStatus { Converged, BudgetExhausted, LineSearchFailed };
std::string to_string(OptStatus s);

// Minimization result. trace[k] is the best value after iteration k; it never
// increases.
struct OptResult {
    std::vector<double> x;
    double f = 0.0;
    std::uint64_t evaluations = 0;
    OptStatus status = OptStatus::Converged;
    std::vector<double> trace;
};

OptResult nelder_mead(const Objective& f, const std::vector<double>& x0, const LocalOptions& opts = {});
OptResult bfgs_fd(const Objective& f, const std::vector<double>& x0, const LocalOptions& opts = {});
std::vector<double> fd_gradient(const Objective& f, const std::vector<double>& x, double h, unsigned workers = 1);

enum class LocalMethod { NelderMead, Bfgs };

struct BasinHoppingOptions {
    int hops = 50;
    double step = 0.3;          // Gaussian perturbation scale per coordinate
    double temperature = 0.05;  // Metropolis temperature in objective units
    std::uint64_t seed = 0;
    LocalMethod local = LocalMethod::NelderMead;
    LocalOptions local_options;
};

// perturb -> local minimize -> Metropolis accept; returns the global best.
// A hop whose local run fails on a non-finite objective is skipped.
OptResult basin_hopping(const Objective& f, const std::vector<double>& x0, const BasinHoppingOptions& opts = {});

enum class OptimizerKind { NelderMead, Bfgs, BasinHopping };

struct ViolationOptions {
    OptimizerKind optimizer = OptimizerKind::BasinHopping;
    BasinHoppingOptions basin;  // its local_options drive the single-run optimizers too
    double support_threshold = 1e-6;
};

struct ViolationResult {
    std::vector<double> params;  // wrapped into parameter ranges
    double violation = 0.0;      // -evaluate(ineq, P); positive means violated
    double seed_violation = 0.0;
    Distribution distribution;
    std::vector<bool> support;  // per event index of A,B,C, P > threshold
    bool matches_fritz_support = false;
    // Same comparison at threshold x10 and /10.
    bool support_match_stable = false;
    std::uint64_t evaluations = 0;
    OptStatus status = OptStatus::Converged;
    std::vector<double> violation_trace;  // nondecreasing
};

// Minimizes evaluate(ineq, P(strategy)) over wrapped parameters starting at
// `seed`. A zero evaluation budget returns the seed itself.
ViolationResult maximize_violation(const PolynomialInequality& ineq, const std::vector<double>& seed,
                                   const ViolationOptions& opts = {});

// Uniform over the parameter ranges.
std::vector<double> random_strategy_params(std::mt19937_64& rng);
std::vector<bool> support_pattern(const Distribution& p, double threshold);

}  // namespace tricausal
