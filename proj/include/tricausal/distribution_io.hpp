#pragma once

#include "tricausal/events.hpp"

#include <string>

namespace tricausal {

// Parses an exact literal: integers, decimals, sqrt2, + - * / and parentheses,
// e.g. "(2+sqrt2)/32", "0.125", "-3/4".
QSqrt2 parse_qsqrt2(const std::string& text);

// Text format:
//   # comment
//   variables A:4 B:4 C:4
//   0 0 0  (2+sqrt2)/32
//   0 1 0  (2-sqrt2)/32
// Outcomes follow the declared variable order; events not listed have
// probability zero. Listing an event twice is an error.
ExactDistribution parse_distribution(const std::string& text);

// Writes every nonzero event. Exact values print symbolically; double values
// print with 17 significant digits.
std::string format_distribution(const ExactDistribution& p);
std::string format_distribution(const Distribution& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace tricausal
