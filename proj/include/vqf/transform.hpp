#pragma once

// The four cost-function transformations and the spin mapping x = (1 - Z)/2.

#include "vqf/encoder.hpp"
#include "vqf/hamiltonian.hpp"
#include "vqf/pboly.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vqf {

enum class TransformKind { Direct, Schaller, Grobner, SimGrobner };

inline constexpr TransformKind kAllTransforms[] = {TransformKind::Direct, TransformKind::Schaller,
                                                   TransformKind::Grobner, TransformKind::SimGrobner};

std::string to_string(TransformKind k);
/// Accepts DIRECT, SCHALLER, GROBNER, SIM-GROBNER / SIM_GROBNER (any case).
TransformKind parse_transform_kind(std::string_view s);

/// Penalty weights for a(x w - w) + b(y w - w) + c(x y - w).
struct GrobnerCoefficients {
  Rational a = -2;
  Rational b = -2;
  Rational c = 1;

  /// -a-b-c > 0, -b-c > 0, -a-c > 0, c > 0
  bool valid() const;
};

struct Transformed {
  BoolPoly cost;
  std::vector<Var> aux;  // auxiliaries introduced, canonical order
};

BoolPoly transform_direct(const ClauseSystem& cs);

/// Each clause A*B + S with a degree-2 monomial becomes
/// 2[(A + B - 1/2)/2 + S]^2 - 1/8; other clauses are squared.
BoolPoly transform_schaller(const ClauseSystem& cs);

Transformed transform_grobner(const ClauseSystem& cs, const GrobnerCoefficients& abc = {});
Transformed transform_sim_grobner(const ClauseSystem& cs);

Transformed apply_transform(const ClauseSystem& cs, TransformKind kind,
                            const GrobnerCoefficients& abc = {});

BoolPoly grobner_penalty(const Var& x, const Var& y, const Var& w, const GrobnerCoefficients& abc);
/// (x y - w)^2 = x y - 2 x y w + w
BoolPoly sim_grobner_penalty(const Var& x, const Var& y, const Var& w);

/// Spin substitution; qubits follow canonical variable order.
Hamiltonian to_hamiltonian(const BoolPoly& f);

}  // namespace vqf
