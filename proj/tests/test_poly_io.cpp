#include "support/generators.hpp"

#include "vqf/errors.hpp"
#include "vqf/poly_io.hpp"

#include <doctest.h>

using namespace vqf;

TEST_CASE("expressions") {
  const auto f = parse_expression("p1 + q1 = 1 + 2*z12");
  CHECK(f == var(Var::p(1)) + var(Var::q(1)) - 1 - Rational(2) * var(Var::carry(1, 2)));
  CHECK(format_expression(f) == "p1 + q1 - 2*z12 - 1");
  CHECK(parse_expression("2(p1 + q2 - 1/2)x") == parse_expression("2*p1*x + 2*q2*x - x"));
  CHECK(parse_expression("0.25*p1 + 3") == parse_expression("1/4*p1 + 3"));
  CHECK(format_expression(parse_expression("1/2*p1")) == "1/2*p1");
  CHECK(format_expression(BoolPoly()) == "0");
}

TEST_CASE("expression errors carry the line") {
  try {
    parse_expression("p1 + * q1", 7);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
  CHECK_THROWS_AS(parse_expression("p1 + (q1"), ParseError);
  CHECK_THROWS_AS(parse_expression("1/0"), ParseError);
  CHECK_THROWS_AS(parse_expression("p1 = q1 = 1"), ParseError);
}

TEST_CASE("format/parse round trip") {
  gen::Rng rng(21);
  const auto vars = gen::named_vars(6);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = gen::poly(rng, vars, gen::uniform_int(rng, 0, 8), 4);
    CHECK(parse_expression(format_expression(f)) == f);
    CHECK(parse_poly_text(format_poly_text(f)) == f);
  }
}

TEST_CASE("poly text") {
  const auto f = parse_poly_text("# cost\n2 * p1*q1\n-1/2 * z12\n3\n");
  CHECK(f == parse_expression("2*p1*q1 - 1/2*z12 + 3"));
  CHECK_THROWS_AS(parse_poly_text("1 * p1\n2 * * q1\n"), ParseError);
}
