#pragma once

#include <stdexcept>
#include <string>

namespace tricausal {

// Malformed or inconsistent caller input (unknown node, bad cardinality, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An exact check that the library itself relies on did not hold.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An objective returned NaN or infinity.
class ObjectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The feasibility LP could not certify either branch at the requested tolerance.
class IndeterminateError : public std::runtime_error {
public:
    IndeterminateError(const std::string& what, double primal_residual, double certificate_value)
        : std::runtime_error(what),
          primal_residual_(primal_residual),
          certificate_value_(certificate_value) {}

    double primal_residual() const { return primal_residual_; }
    double certificate_value() const { return certificate_value_; }

private:
    double primal_residual_;
    double certificate_value_;
};

}  // namespace tricausal
