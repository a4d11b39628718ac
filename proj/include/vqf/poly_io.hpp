#pragma once

// Text forms of polynomials.
//
//  expression   one line, e.g. "p1 + q1 - 1 - 2*z12" or "2*(p1 + q2 - 1/2)*x";
//               "lhs = rhs" is read as lhs - rhs.
//  poly text    one term per line, "coeff * var1*var2*..."; '#' starts a comment.

#include "vqf/pboly.hpp"

#include <string>
#include <string_view>

namespace vqf {

/// Parses a single-line expression. `line` is reported in ParseError.
BoolPoly parse_expression(std::string_view text, int line = 1);

/// Canonical single-line form; non-constant terms first, constant last.
std::string format_expression(const BoolPoly& a);

BoolPoly parse_poly_text(std::string_view text);
std::string format_poly_text(const BoolPoly& a);

std::string format_rational(const Rational& r);

}  // namespace vqf
