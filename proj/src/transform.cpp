#include "vqf/transform.hpp"

#include "vqf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace vqf {

std::string to_string(TransformKind k) {
  switch (k) {
    case TransformKind::Direct:
      return "DIRECT";
    case TransformKind::Schaller:
      return "SCHALLER";
    case TransformKind::Grobner:
      return "GROBNER";
    case TransformKind::SimGrobner:
      return "SIM-GROBNER";
  }
  return "?";
}

TransformKind parse_transform_kind(std::string_view s) {
  std::string u;
  for (char c : s) u += c == '_' ? '-' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto k : kAllTransforms) {
    if (to_string(k) == u) return k;
  }
  throw InvalidConfig("unknown transformation '" + std::string(s) + "'");
}

bool GrobnerCoefficients::valid() const {
  return -a - b - c > 0 && -b - c > 0 && -a - c > 0 && c > 0;
}

BoolPoly grobner_penalty(const Var& x, const Var& y, const Var& w, const GrobnerCoefficients& abc) {
  const BoolPoly wv = var(w);
  return abc.a * (var(x) * wv - wv) + abc.b * (var(y) * wv - wv) + abc.c * (var(x) * var(y) - wv);
}

BoolPoly sim_grobner_penalty(const Var& x, const Var& y, const Var& w) {
  return square(var(x) * var(y) - var(w));
}

BoolPoly transform_direct(const ClauseSystem& cs) { return cost_function(cs); }

namespace {

bool integral(const BoolPoly& s) {
  return std::all_of(s.terms().begin(), s.terms().end(), [](const auto& t) {
    return boost::multiprecision::denominator(t.second) == 1;
  });
}

BoolPoly schaller_clause(const BoolPoly& clause) {
  if (clause.degree() < 2) return square(clause);
  for (const auto& [m, k] : clause.terms()) {
    if (m.degree() != 2) continue;
    BoolPoly rest = clause - BoolPoly::term(m, k);
    rest *= Rational(1) / k;
    if (!integral(rest)) continue;
    const BoolPoly a = var(m.vars()[0]);
    const BoolPoly b = var(m.vars()[1]);
    const BoolPoly inner = Rational(1, 2) * (a + b - BoolPoly(Rational(1, 2))) + rest;
    return k * k * (Rational(2) * square(inner) - BoolPoly(Rational(1, 8)));
  }
  throw UndecomposableClause("no A*B + S split with integer S for a clause of degree " +
                             std::to_string(clause.degree()));
}

// Replaces the product x*y by w in every monomial containing both.
BoolPoly replace_product(const BoolPoly& p, const Var& x, const Var& y, const Var& w) {
  BoolPoly out;
  for (const auto& [m, c] : p.terms()) {
    if (!(m.contains(x) && m.contains(y))) {
      out.add_term(m, c);
      continue;
    }
    std::vector<Var> vs;
    for (const auto& v : m.vars()) {
      if (v != x && v != y) vs.push_back(v);
    }
    vs.push_back(w);
    out.add_term(Monomial(std::move(vs)), c);
  }
  return out;
}

using AuxTable = std::map<std::pair<Var, Var>, Var>;

// Substitutes products until squaring the clause yields degree <= 2: monomials
// of degree >= 3 are reduced pairwise, and a degree-2 monomial is replaced when
// it multiplies with another monomial of the clause into degree >= 3.
BoolPoly quadratize_clause(BoolPoly clause, AuxTable& aux) {
  auto use = [&](Var x, Var y) {
    const Var w = Var::aux_for(x, y);
    aux.try_emplace({x, y}, w);
    clause = replace_product(clause, x, y, w);
  };
  while (true) {
    const auto& terms = clause.terms();
    auto high = std::find_if(terms.begin(), terms.end(), [](const auto& t) { return t.first.degree() >= 3; });
    if (high != terms.end()) {
      const auto& vs = high->first.vars();
      use(vs[0], vs[1]);
      continue;
    }
    std::vector<Monomial> participating;
    for (const auto& [m, c] : terms) {
      if (m.degree() != 2) continue;
      for (const auto& [o, oc] : terms) {
        if (o.is_constant() || o == m) continue;
        if ((m * o).degree() >= 3) {
          participating.push_back(m);
          break;
        }
      }
    }
    if (participating.empty()) return clause;
    for (const auto& m : participating) use(m.vars()[0], m.vars()[1]);
  }
}

Transformed replacement_transform(const ClauseSystem& cs, bool simplified, const GrobnerCoefficients& abc) {
  AuxTable aux;
  Transformed out;
  for (const auto& c : cs.clauses) out.cost += square(quadratize_clause(c, aux));
  for (const auto& [xy, w] : aux) {
    out.cost += simplified ? sim_grobner_penalty(xy.first, xy.second, w)
                           : grobner_penalty(xy.first, xy.second, w, abc);
    out.aux.push_back(w);
  }
  std::sort(out.aux.begin(), out.aux.end());
  return out;
}

}  // namespace

BoolPoly transform_schaller(const ClauseSystem& cs) {
  BoolPoly out;
  for (const auto& c : cs.clauses) out += schaller_clause(c);
  return out;
}

Transformed transform_grobner(const ClauseSystem& cs, const GrobnerCoefficients& abc) {
  if (!abc.valid()) {
    throw InvalidPenaltyCoefficients("(a, b, c) must satisfy -a-b-c > 0, -b-c > 0, -a-c > 0, c > 0");
  }
  return replacement_transform(cs, false, abc);
}

Transformed transform_sim_grobner(const ClauseSystem& cs) { return replacement_transform(cs, true, {}); }

Transformed apply_transform(const ClauseSystem& cs, TransformKind kind, const GrobnerCoefficients& abc) {
  switch (kind) {
    case TransformKind::Direct:
      return {transform_direct(cs), {}};
    case TransformKind::Schaller:
      return {transform_schaller(cs), {}};
    case TransformKind::Grobner:
      return transform_grobner(cs, abc);
    case TransformKind::SimGrobner:
      return transform_sim_grobner(cs);
  }
  throw InvalidConfig("unknown transformation");
}

Hamiltonian to_hamiltonian(const BoolPoly& f) {
  Hamiltonian h;
  h.qubit_vars = f.variables();
  std::map<Var, int> qubit;
  for (std::size_t k = 0; k < h.qubit_vars.size(); ++k) qubit.emplace(h.qubit_vars[k], static_cast<int>(k));

  // c * prod (1 - Z_v)/2 = c/2^k * sum over subsets S of (-1)^|S| prod_{v in S} Z_v
  std::map<std::vector<int>, Rational> acc;
  for (const auto& [m, c] : f.terms()) {
    const auto k = m.vars().size();
    const Rational scaled = c / Rational(boost::multiprecision::cpp_int(1) << k);
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << k); ++subset) {
      std::vector<int> qs;
      for (std::size_t b = 0; b < k; ++b) {
        if ((subset >> b) & 1U) qs.push_back(qubit.at(m.vars()[b]));
      }
      std::sort(qs.begin(), qs.end());
      acc[qs] += (qs.size() % 2 == 0) ? scaled : Rational(-scaled);
    }
  }
  for (const auto& [qs, c] : acc) {
    if (c == 0) continue;
    if (qs.empty()) {
      h.offset = to_double(c);
    } else {
      h.terms.push_back({to_double(c), qs});
    }
  }
  std::sort(h.terms.begin(), h.terms.end(), [](const PauliZTerm& a, const PauliZTerm& b) {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a.qubits < b.qubits;
  });
  return h;
}

}  // namespace vqf
