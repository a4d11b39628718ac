#include "vqf/random_instance.hpp"

#include "vqf/errors.hpp"
#include "vqf/poly_io.hpp"
#include "vqf/random.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace vqf {

namespace {

int below(SplitMix64& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

}  // namespace

ClauseSystem random_clause_system(const RandomClauseSpec& spec) {
  if (spec.n_vars < 2 || spec.n_vars > 24) throw InvalidConfig("n_vars must lie in [2, 24]");
  if (spec.n_clauses < 1) throw InvalidConfig("n_clauses must be at least 1");
  if (spec.products < 0 || spec.linear < 0 || spec.products + spec.linear == 0) {
    throw InvalidConfig("a clause needs at least one monomial");
  }
  const int n_pairs = spec.n_vars * (spec.n_vars - 1) / 2;
  if (spec.products > n_pairs || spec.linear > spec.n_vars) throw InvalidConfig("too many monomials per clause");

  SplitMix64 rng(splitmix64(spec.seed));
  std::vector<Var> vars;
  for (int k = 0; k < spec.n_vars; ++k) vars.push_back(Var::named("x" + std::to_string(k)));
  Assignment planted;
  for (const auto& v : vars) planted[v] = static_cast<int>(rng() & 1U);

  ClauseSystem cs;
  std::set<std::string> seen;
  for (int attempts = 0; static_cast<int>(cs.clauses.size()) < spec.n_clauses; ++attempts) {
    if (attempts > 1000 * spec.n_clauses) throw InvalidConfig("could not draw enough distinct clauses");
    BoolPoly clause;
    std::set<std::pair<int, int>> pairs;
    while (static_cast<int>(pairs.size()) < spec.products) {
      int a = below(rng, spec.n_vars), b = below(rng, spec.n_vars);
      if (a == b) continue;
      pairs.insert({std::min(a, b), std::max(a, b)});
    }
    for (auto [a, b] : pairs) clause = clause + var(vars[static_cast<std::size_t>(a)]) * var(vars[static_cast<std::size_t>(b)]);
    std::set<int> singles;
    while (static_cast<int>(singles.size()) < spec.linear) singles.insert(below(rng, spec.n_vars));
    for (int a : singles) clause = clause + var(vars[static_cast<std::size_t>(a)]);
    clause = clause - BoolPoly(evaluate(clause, planted));
    if (clause.degree() == 0 || !seen.insert(format_expression(clause)).second) continue;
    cs.clauses.push_back(clause);
  }
  cs.collect_free_vars();
  return cs;
}

}  // namespace vqf
