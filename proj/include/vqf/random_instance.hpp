#pragma once

// Random clause systems with a planted zero, standing in for cost functions
// that do not come from a multiplication table.

#include "vqf/encoder.hpp"

#include <cstdint>

namespace vqf {

struct RandomClauseSpec {
  std::uint64_t seed = 0;
  int n_vars = 6;
  int n_clauses = 4;
  int products = 2;  // degree-2 monomials per clause; 2 or more lets DIRECT reach weight 4
  int linear = 2;    // degree-1 monomials per clause
};

/// Variables x0..x{n-1}; every coefficient is 1 and each constant is chosen so
/// that a planted assignment satisfies all clauses, hence min cost = 0.
ClauseSystem random_clause_system(const RandomClauseSpec& spec);

}  // namespace vqf
