#pragma once

#include "tricausal/inequality.hpp"

#include <string>

namespace tricausal {

// One term per line:  "+1 * P[A_l,B_l](11) * P[C_l,C_r](01)". Blank lines,
// "# ..." comments and a closing ">= 0" line are ignored; "0" alone is the
// zero inequality. Outcomes are digits, or comma separated when any is > 9.
PolynomialInequality parse_inequality(const std::string& text);
std::string format_inequality(const PolynomialInequality& ineq);

// Multi-line display in the P_{A_l B_l}(11) notation, a few terms per line.
std::string pretty_inequality(const PolynomialInequality& ineq, int terms_per_line = 4);

std::string format_rational(const Rational& r);
Rational parse_rational(const std::string& text);

}  // namespace tricausal
