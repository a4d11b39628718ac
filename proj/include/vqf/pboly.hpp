#pragma once

// Multilinear pseudo-Boolean polynomials over named binary variables.
//
// Coefficients are exact rationals. Products apply x*x = x so every stored
// monomial is a set of distinct variables, and the map never holds a zero
// coefficient; two polynomials that agree on every 0/1 assignment therefore
// have identical term maps.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace vqf {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);

enum class Role : std::uint8_t { P, Q, Carry, Aux, Other };

/// A binary variable. Ordering is (role, i, j, label), which is the canonical
/// variable order used for printing and qubit assignment.
struct Var {
  Role role = Role::Other;
  int i = -1;
  int j = -1;
  std::string label;  // only for Role::Other and pair-derived auxiliaries

  static Var p(int i) { return {Role::P, i, -1, {}}; }
  static Var q(int j) { return {Role::Q, j, -1, {}}; }
  /// Carry from column `from` into column `to`.
  static Var carry(int from, int to) { return {Role::Carry, from, to, {}}; }
  /// Auxiliary w_ij standing for the product p_i q_j.
  static Var aux(int i, int j) { return {Role::Aux, i, j, {}}; }
  /// Auxiliary standing for the product a*b of arbitrary variables.
  static Var aux_for(const Var& a, const Var& b);
  /// Parses a printed name back into a variable ("p3", "z12", "z10_11", "w21", "x").
  static Var named(std::string_view name);

  std::string name() const;

  friend auto operator<=>(const Var&, const Var&) = default;
  friend bool operator==(const Var&, const Var&) = default;
};

/// Product of distinct variables; the empty monomial is the constant 1.
class Monomial {
 public:
  Monomial() = default;
  Monomial(std::initializer_list<Var> vars);
  explicit Monomial(std::vector<Var> vars);

  const std::vector<Var>& vars() const noexcept { return vars_; }
  int degree() const noexcept { return static_cast<int>(vars_.size()); }
  bool is_constant() const noexcept { return vars_.empty(); }
  bool contains(const Var& v) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Degree first, then lexicographic in canonical variable order.
  friend bool operator<(const Monomial& a, const Monomial& b);

 private:
  std::vector<Var> vars_;
};

class BoolPoly {
 public:
  using TermMap = std::map<Monomial, Rational>;

  BoolPoly() = default;
  BoolPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  BoolPoly(int c) : BoolPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static BoolPoly variable(const Var& v);
  static BoolPoly term(const Monomial& m, const Rational& c);

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  Rational constant() const;
  Rational coefficient(const Monomial& m) const;
  /// Maximum monomial size; 0 for the zero polynomial.
  int degree() const;
  /// Variables in canonical order.
  std::vector<Var> variables() const;

  void add_term(const Monomial& m, const Rational& c);

  BoolPoly& operator+=(const BoolPoly& o);
  BoolPoly& operator-=(const BoolPoly& o);
  BoolPoly& operator*=(const BoolPoly& o);
  BoolPoly& operator*=(const Rational& c);

  friend BoolPoly operator+(BoolPoly a, const BoolPoly& b) { return a += b; }
  friend BoolPoly operator-(BoolPoly a, const BoolPoly& b) { return a -= b; }
  friend BoolPoly operator*(const BoolPoly& a, const BoolPoly& b);
  friend BoolPoly operator*(BoolPoly a, const Rational& c) { return a *= c; }
  friend BoolPoly operator*(const Rational& c, BoolPoly a) { return a *= c; }
  friend BoolPoly operator-(BoolPoly a);
  friend bool operator==(const BoolPoly&, const BoolPoly&) = default;

 private:
  TermMap terms_;
};

inline BoolPoly var(const Var& v) { return BoolPoly::variable(v); }
inline BoolPoly add(const BoolPoly& a, const BoolPoly& b) { return a + b; }
inline BoolPoly mul(const BoolPoly& a, const BoolPoly& b) { return a * b; }
inline BoolPoly square(const BoolPoly& a) { return a * a; }

/// Target of a variable fix: a constant bit or another (possibly negated) variable.
struct Alias {
  Var var;
  bool negated = false;
  friend bool operator==(const Alias&, const Alias&) = default;
};
using FixTarget = std::variant<int, Alias>;

/// Consistent set of variable fixes. Adding a second, different target for a
/// variable throws ConflictingFix.
class Fixes {
 public:
  Fixes() = default;
  Fixes(std::initializer_list<std::pair<Var, FixTarget>> init);

  void add(const Var& v, const FixTarget& t);
  bool contains(const Var& v) const { return map_.count(v) != 0; }
  const std::map<Var, FixTarget>& map() const noexcept { return map_; }
  bool empty() const noexcept { return map_.empty(); }
  std::size_t size() const noexcept { return map_.size(); }

  /// Follows alias chains; returns a constant, a free alias, or the variable itself.
  FixTarget resolve(const Var& v) const;

 private:
  std::map<Var, FixTarget> map_;
};

BoolPoly substitute(const BoolPoly& a, const Fixes& fixes);

struct Interval {
  Rational lo;
  Rational hi;
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// Interval containing every value of `a`: positive coefficients feed the upper
/// end, negative ones the lower end.
Interval bounds(const BoolPoly& a);

using Assignment = std::map<Var, int>;

Rational evaluate(const BoolPoly& a, const Assignment& z);

/// Polynomial with integer coefficients (scaled by the common denominator) and
/// monomials packed as bitmasks over an explicit variable list. Used for fast
/// exhaustive evaluation.
struct PackedPoly {
  std::vector<Var> vars;
  Rational scale = 1;  // value(x) = sum / scale
  std::vector<std::pair<std::uint64_t, std::int64_t>> terms;

  static PackedPoly from(const BoolPoly& a);
  static PackedPoly from(const BoolPoly& a, const std::vector<Var>& order);

  std::int64_t scaled_value(std::uint64_t x) const;
  double value(std::uint64_t x) const;
};

struct Minima {
  Rational value;
  std::vector<Var> vars;              // bit k of a mask is vars[k]
  std::vector<std::uint64_t> masks;   // ascending

  std::vector<Assignment> assignments() const;
};

inline constexpr int kDefaultBruteForceCap = 24;

/// Exhaustive enumeration of all 2^n assignments.
Minima brute_force_minima(const BoolPoly& a, int cap = kDefaultBruteForceCap);

/// All global minimizers by depth-first branch and bound over interval bounds.
/// Exact; usable beyond the brute-force cap when the bounds prune well.
Minima exact_minima(const BoolPoly& a, int max_vars = 64);

}  // namespace vqf
