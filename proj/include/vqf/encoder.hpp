#pragma once

// Factoring as a system of pseudo-Boolean column equations.

#include "vqf/pboly.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vqf {

struct FactoringInstance {
  std::uint64_t n = 0;
  int bit_length = 0;
  /// Both multipliers have their most and least significant bits set.
  bool msb_lsb_fixed = true;

  /// Throws InfeasibleInstance when N or the bit length is unusable.
  void validate() const;
};

/// Clauses constrained to zero plus the fixes learned so far.
struct ClauseSystem {
  std::vector<BoolPoly> clauses;
  Fixes fixes;
  std::vector<Var> free_vars;  // canonical order
  std::optional<FactoringInstance> instance;

  /// Recomputes free_vars as the variables occurring in the clauses.
  void collect_free_vars();

  /// Multipliers (p, q) for an assignment of the free variables, when every
  /// multiplier bit is determined by the assignment and the fixes.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> decode_factors(const Assignment& z) const;
};

ClauseSystem build_clauses(const FactoringInstance& inst);

inline constexpr int kDefaultProbeDepth = 2;

/// Sound reduction to a fixpoint: tight-bound forcing (covers single-variable
/// clauses and all-nonnegative clauses with zero constant), probing of single
/// variables (depth 1) and pairs (depth 2) with propagation, and removal of
/// products proven zero. The solution set is preserved exactly.
ClauseSystem preprocess(const ClauseSystem& cs, int probe_depth = kDefaultProbeDepth);

/// Sum of squared clauses.
BoolPoly cost_function(const ClauseSystem& cs);

/// Clause file: one clause per line ("= 0" implied, "lhs = rhs" accepted),
/// '#' comments, and directives
///   @instance n=143 bits=4 msb_lsb_fixed=1
///   @fix z12 = 0        @fix x = y        @fix x = 1 - y
///   @vars p1 q1 p2 q2
ClauseSystem parse_clause_text(const std::string& text);
ClauseSystem load_clause_file(const std::filesystem::path& path);
std::string format_clause_text(const ClauseSystem& cs);

/// Factor pairs (p, q) decoded from every global minimizer of the cost function.
std::vector<std::pair<std::uint64_t, std::uint64_t>> solution_factor_pairs(const ClauseSystem& cs,
                                                                           const Minima& minima);

}  // namespace vqf
