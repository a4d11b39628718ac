#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "vqf/encoder.hpp"
#include "vqf/errors.hpp"
#include "vqf/poly_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace vqf;

namespace {

using Pairs = std::set<std::pair<std::uint64_t, std::uint64_t>>;

// Every (p, q) with p*q = n, both exactly `bits` wide and odd, by trial division.
Pairs trial_division(std::uint64_t n, int bits) {
  Pairs out;
  const std::uint64_t lo = std::uint64_t{1} << (bits - 1), hi = (std::uint64_t{1} << bits) - 1;
  for (std::uint64_t p = lo | 1; p <= hi; p += 2) {
    if (n % p) continue;
    const std::uint64_t q = n / p;
    if (q >= lo && q <= hi && (q & 1U)) out.insert({p, q});
  }
  return out;
}

Pairs decoded(const ClauseSystem& cs) {
  const auto cost = cost_function(cs);
  const auto m = exact_minima(cost);
  if (m.value != 0) return {};
  const auto v = solution_factor_pairs(cs, m);
  return {v.begin(), v.end()};
}

ClauseSystem system_for(std::uint64_t n, int bits) {
  FactoringInstance inst;
  inst.n = n;
  inst.bit_length = bits;
  return build_clauses(inst);
}

}  // namespace

TEST_CASE("143 column clauses") {
  const auto cs = system_for(143, 4);
  REQUIRE(!cs.clauses.empty());
  CHECK(cs.clauses.front() == parse_expression("p1 + q1 - 1 - 2*z12"));
  CHECK(cs.clauses.back() == parse_expression("z67 + z57 - 1"));
  for (const auto& c : cs.clauses) {
    for (const auto& v : c.variables()) CHECK(std::find(cs.free_vars.begin(), cs.free_vars.end(), v) != cs.free_vars.end());
  }
}

TEST_CASE("the column identity reproduces N at a solution") {
  // 143 = 11 * 13: p = 1011 (p1 = 1, p2 = 0), q = 1101 (q1 = 0, q2 = 1)
  const auto cs = system_for(143, 4);
  const auto m = exact_minima(cost_function(cs));
  CHECK(m.value == 0);
  for (const auto& z : m.assignments()) {
    for (const auto& c : cs.clauses) CHECK(evaluate(c, z) == 0);
    const auto pq = cs.decode_factors(z);
    REQUIRE(pq);
    CHECK(pq->first * pq->second == 143);
  }
}

TEST_CASE("35 has the solutions 5*7 and 7*5") {
  CHECK(decoded(system_for(35, 3)) == Pairs{{5, 7}, {7, 5}});
  CHECK(trial_division(35, 3) == Pairs{{5, 7}, {7, 5}});
}

TEST_CASE("invalid instances") {
  CHECK_THROWS_AS(system_for(144, 4), InfeasibleInstance);
  CHECK_THROWS_AS(system_for(7, 2), InfeasibleInstance);
  CHECK_THROWS_AS(system_for(143, 1), InfeasibleInstance);
  CHECK_THROWS_AS(system_for(143, 8), InfeasibleInstance);
}

TEST_CASE("preprocessing 143 leaves the four multiplier bits") {
  const auto cs = preprocess(system_for(143, 4), 2);
  for (const auto& v : cs.free_vars) CHECK((v.role == Role::P || v.role == Role::Q));
  CHECK(cs.free_vars.size() == 4);
  CHECK(decoded(cs) == Pairs{{11, 13}, {13, 11}});
  const auto m = brute_force_minima(cost_function(cs));
  std::set<std::vector<int>> sols;
  for (const auto& z : m.assignments()) sols.insert({z.at(Var::p(1)), z.at(Var::p(2)), z.at(Var::q(1)), z.at(Var::q(2))});
  CHECK(sols == std::set<std::vector<int>>{{0, 1, 1, 0}, {1, 0, 0, 1}});
}

TEST_CASE("probing depth 1 fixes the first carry") {
  const auto cs = preprocess(system_for(143, 4), 1);
  CHECK(std::get<int>(cs.fixes.resolve(Var::carry(1, 2))) == 0);
}

TEST_CASE("preprocessing preserves the factor pairs") {
  for (auto [n, bits] : std::vector<std::pair<std::uint64_t, int>>{{143, 4}, {35, 3}, {25, 3}, {291311, 10}}) {
    CAPTURE(n);
    const auto full = system_for(n, bits);
    const auto expect = trial_division(n, bits);
    CHECK(!expect.empty());
    // the unreduced 291311 system is too wide for exact minimization
    const bool small = full.free_vars.size() <= 24;
    if (small) CHECK(decoded(full) == expect);
    for (int depth : {0, 1, 2}) {
      if (!small && depth < 2) continue;
      const auto red = preprocess(full, depth);
      CHECK(decoded(red) == expect);
      CHECK(red.free_vars.size() <= full.free_vars.size());
    }
  }
}

TEST_CASE("291311 reduces to six free variables") {
  CHECK(preprocess(system_for(291311, 10), 2).free_vars.size() == 6);
}

TEST_CASE("preprocessing matches trial division on every small odd N") {
  for (int bits = 2; bits <= 4; ++bits) {
    const std::uint64_t lo = std::uint64_t{1} << (2 * bits - 2);
    const std::uint64_t hi = (std::uint64_t{1} << (2 * bits)) - 1;
    for (std::uint64_t n = std::max<std::uint64_t>(lo | 1, 9); n <= hi; n += 2) {
      CAPTURE(n);
      ClauseSystem full;
      try {
        full = system_for(n, bits);
      } catch (const InfeasibleInstance&) {
        CHECK(trial_division(n, bits).empty());
        continue;
      }
      const auto expect = trial_division(n, bits);
      Pairs got;
      try {
        got = decoded(preprocess(full, 2));
      } catch (const InfeasibleInstance&) {
        got.clear();
      }
      CHECK(got == expect);
    }
  }
}

TEST_CASE("preprocessing is idempotent and deterministic") {
  for (auto [n, bits] : std::vector<std::pair<std::uint64_t, int>>{{143, 4}, {291311, 10}, {35, 3}}) {
    const auto once = preprocess(system_for(n, bits), 2);
    const auto twice = preprocess(once, 2);
    CHECK(twice.clauses == once.clauses);
    CHECK(twice.free_vars == once.free_vars);
    CHECK(format_clause_text(preprocess(system_for(n, bits), 2)) == format_clause_text(once));
  }
}

TEST_CASE("cost function") {
  ClauseSystem cs;
  CHECK(cost_function(cs).is_zero());
  cs.clauses = {parse_expression("x - 1")};
  CHECK(cost_function(cs) == parse_expression("1 - x"));
}

TEST_CASE("cost function is nonnegative and vanishes exactly on solutions") {
  gen::Rng rng(31);
  const auto vars = gen::named_vars(5);
  for (int trial = 0; trial < 50; ++trial) {
    ClauseSystem cs;
    for (int k = 0; k < 3; ++k) cs.clauses.push_back(gen::poly(rng, vars, 3, 2));
    const auto f = cost_function(cs);
    for (std::uint64_t x = 0; x < 32; ++x) {
      const auto z = oracle::assignment(vars, x);
      bool all_zero = true;
      for (const auto& c : cs.clauses) all_zero = all_zero && oracle::eval(c, z) == 0;
      const auto v = oracle::eval(f, z);
      CHECK(v >= 0);
      CHECK((v == 0) == all_zero);
    }
  }
}

TEST_CASE("clause files") {
  const auto cs = load_clause_file(VQF_DATA_DIR "/143_reduced.txt");
  CHECK(cs.clauses.size() == 3);
  CHECK(cs.free_vars.size() == 4);
  CHECK(parse_clause_text("").clauses.empty());
  CHECK(parse_clause_text("# nothing\n\n").clauses.empty());
  try {
    parse_clause_text("p1 + q1 - 1\n2x* + 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK(parse_clause_text("p1 + q1 = 1\n").clauses.front() == parse_expression("p1 + q1 - 1"));
}

TEST_CASE("clause text round trip keeps clauses, fixes and the instance") {
  const auto cs = preprocess(system_for(291311, 10), 2);
  const auto back = parse_clause_text(format_clause_text(cs));
  CHECK(back.clauses == cs.clauses);
  CHECK(back.free_vars == cs.free_vars);
  CHECK(back.fixes.map() == cs.fixes.map());
  REQUIRE(back.instance);
  CHECK(back.instance->n == 291311);
  CHECK(decoded(back) == trial_division(291311, 10));
}
