#include "vqf/pboly.hpp"

#include "vqf/errors.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>
#include <set>

namespace vqf {

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

std::string pair_name(char prefix, int a, int b) {
  if (a >= 0 && a < 10 && b >= 0 && b < 10) {
    return prefix + std::to_string(a) + std::to_string(b);
  }
  return prefix + std::to_string(a) + "_" + std::to_string(b);
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// "12" -> (1,2); "10_11" -> (10,11)
bool parse_index_pair(std::string_view s, int& a, int& b) {
  if (auto us = s.find('_'); us != std::string_view::npos) {
    auto l = s.substr(0, us);
    auto r = s.substr(us + 1);
    if (!all_digits(l) || !all_digits(r)) return false;
    a = std::stoi(std::string(l));
    b = std::stoi(std::string(r));
    return true;
  }
  if (s.size() == 2 && all_digits(s)) {
    a = s[0] - '0';
    b = s[1] - '0';
    return true;
  }
  return false;
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

}  // namespace

Var Var::aux_for(const Var& a, const Var& b) {
  if (a.role == Role::P && b.role == Role::Q) return aux(a.i, b.i);
  if (a.role == Role::Q && b.role == Role::P) return aux(b.i, a.i);
  const auto& lo = std::min(a, b);
  const auto& hi = std::max(a, b);
  return {Role::Aux, -1, -1, "w_" + lo.name() + "_" + hi.name()};
}

Var Var::named(std::string_view name) {
  if (!valid_identifier(name)) {
    throw Error("invalid variable name '" + std::string(name) + "'");
  }
  const auto rest = name.substr(1);
  int a = 0;
  int b = 0;
  switch (name[0]) {
    case 'p':
      if (all_digits(rest)) return p(std::stoi(std::string(rest)));
      break;
    case 'q':
      if (all_digits(rest)) return q(std::stoi(std::string(rest)));
      break;
    case 'z':
      if (parse_index_pair(rest, a, b)) return carry(a, b);
      break;
    case 'w':
      if (parse_index_pair(rest, a, b)) return aux(a, b);
      if (name.starts_with("w_")) return {Role::Aux, -1, -1, std::string(name)};
      break;
    default:
      break;
  }
  return {Role::Other, -1, -1, std::string(name)};
}

std::string Var::name() const {
  switch (role) {
    case Role::P:
      return "p" + std::to_string(i);
    case Role::Q:
      return "q" + std::to_string(i);
    case Role::Carry:
      return pair_name('z', i, j);
    case Role::Aux:
      return label.empty() ? pair_name('w', i, j) : label;
    case Role::Other:
      return label;
  }
  return label;
}

// ---------------------------------------------------------------------------

Monomial::Monomial(std::initializer_list<Var> vars) : Monomial(std::vector<Var>(vars)) {}

Monomial::Monomial(std::vector<Var> vars) : vars_(std::move(vars)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
}

bool Monomial::contains(const Var& v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.vars_.reserve(a.vars_.size() + b.vars_.size());
  std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                 std::back_inserter(out.vars_));
  return out;
}

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.vars_ < b.vars_;
}

// ---------------------------------------------------------------------------

BoolPoly::BoolPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

BoolPoly BoolPoly::variable(const Var& v) { return term(Monomial{v}, 1); }

BoolPoly BoolPoly::term(const Monomial& m, const Rational& c) {
  BoolPoly out;
  out.add_term(m, c);
  return out;
}

Rational BoolPoly::constant() const { return coefficient(Monomial{}); }

Rational BoolPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int BoolPoly::degree() const {
  // Map is ordered by degree first.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

std::vector<Var> BoolPoly::variables() const {
  std::set<Var> vs;
  for (const auto& [m, c] : terms_) vs.insert(m.vars().begin(), m.vars().end());
  return {vs.begin(), vs.end()};
}

void BoolPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

BoolPoly& BoolPoly::operator+=(const BoolPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

BoolPoly& BoolPoly::operator-=(const BoolPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

BoolPoly& BoolPoly::operator*=(const BoolPoly& o) { return *this = *this * o; }

BoolPoly& BoolPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, v] : terms_) v *= c;
  }
  return *this;
}

BoolPoly operator*(const BoolPoly& a, const BoolPoly& b) {
  BoolPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

BoolPoly operator-(BoolPoly a) { return a *= Rational(-1); }

// ---------------------------------------------------------------------------

Fixes::Fixes(std::initializer_list<std::pair<Var, FixTarget>> init) {
  for (const auto& [v, t] : init) add(v, t);
}

namespace {

FixTarget negate(const FixTarget& t) {
  if (const int* c = std::get_if<int>(&t)) return 1 - *c;
  auto a = std::get<Alias>(t);
  a.negated = !a.negated;
  return a;
}

}  // namespace

FixTarget Fixes::resolve(const Var& v) const {
  FixTarget cur = Alias{v, false};
  for (std::size_t hops = 0; hops <= map_.size(); ++hops) {
    const auto* a = std::get_if<Alias>(&cur);
    if (a == nullptr) return cur;
    auto it = map_.find(a->var);
    if (it == map_.end()) return cur;
    cur = a->negated ? negate(it->second) : it->second;
  }
  throw ConflictingFix("cyclic alias chain through " + v.name());
}

void Fixes::add(const Var& v, const FixTarget& t) {
  if (const int* c = std::get_if<int>(&t); c != nullptr && *c != 0 && *c != 1) {
    throw ConflictingFix(v.name() + " fixed to non-binary value " + std::to_string(*c));
  }
  // Normalize the target through existing fixes before comparing.
  FixTarget target = t;
  if (const auto* a = std::get_if<Alias>(&t)) {
    auto r = resolve(a->var);
    target = a->negated ? negate(r) : r;
    if (const auto* ra = std::get_if<Alias>(&target); ra != nullptr && ra->var == v) {
      if (ra->negated) throw ConflictingFix(v.name() + " aliased to its own negation");
      return;
    }
  }
  auto it = map_.find(v);
  if (it != map_.end()) {
    if (resolve(v) != target) {
      throw ConflictingFix("variable " + v.name() + " has two distinct fix targets");
    }
    return;
  }
  map_.emplace(v, target);
}

BoolPoly substitute(const BoolPoly& a, const Fixes& fixes) {
  if (fixes.empty()) return a;
  BoolPoly out;
  for (const auto& [m, c] : a.terms()) {
    BoolPoly t(c);
    for (const auto& v : m.vars()) {
      if (!fixes.contains(v)) {
        t *= var(v);
        continue;
      }
      auto r = fixes.resolve(v);
      if (const int* bit = std::get_if<int>(&r)) {
        if (*bit == 0) {
          t = BoolPoly{};
          break;
        }
      } else {
        const auto& al = std::get<Alias>(r);
        t *= al.negated ? BoolPoly(1) - var(al.var) : var(al.var);
      }
    }
    out += t;
  }
  return out;
}

Interval bounds(const BoolPoly& a) {
  Interval iv{0, 0};
  for (const auto& [m, c] : a.terms()) {
    if (m.is_constant()) {
      iv.lo += c;
      iv.hi += c;
    } else if (c > 0) {
      iv.hi += c;
    } else {
      iv.lo += c;
    }
  }
  return iv;
}

Rational evaluate(const BoolPoly& a, const Assignment& z) {
  Rational sum = 0;
  for (const auto& [m, c] : a.terms()) {
    bool on = true;
    for (const auto& v : m.vars()) {
      auto it = z.find(v);
      if (it == z.end()) throw MissingVariable("assignment does not cover " + v.name());
      if (it->second == 0) on = false;
    }
    if (on) sum += c;
  }
  return sum;
}

// ---------------------------------------------------------------------------

PackedPoly PackedPoly::from(const BoolPoly& a) { return from(a, a.variables()); }

PackedPoly PackedPoly::from(const BoolPoly& a, const std::vector<Var>& order) {
  if (order.size() > 64) throw TooManyVariables("packed polynomials hold at most 64 variables");
  PackedPoly out;
  out.vars = order;
  std::map<Var, int> index;
  for (std::size_t k = 0; k < order.size(); ++k) index.emplace(order[k], static_cast<int>(k));

  boost::multiprecision::cpp_int lcd = 1;
  for (const auto& [m, c] : a.terms()) {
    const auto& d = boost::multiprecision::denominator(c);
    lcd = lcd / boost::multiprecision::gcd(lcd, d) * d;
  }
  out.scale = Rational(lcd);

  boost::multiprecision::cpp_int total = 0;
  for (const auto& [m, c] : a.terms()) {
    std::uint64_t mask = 0;
    for (const auto& v : m.vars()) {
      auto it = index.find(v);
      if (it == index.end()) throw MissingVariable("variable order does not cover " + v.name());
      mask |= std::uint64_t{1} << it->second;
    }
    Rational scaled = c * out.scale;
    boost::multiprecision::cpp_int n = boost::multiprecision::numerator(scaled);
    total += boost::multiprecision::abs(n);
    if (total > (boost::multiprecision::cpp_int(1) << 62)) {
      throw Error("polynomial coefficients too large for packed evaluation");
    }
    out.terms.emplace_back(mask, n.convert_to<std::int64_t>());
  }
  return out;
}

std::int64_t PackedPoly::scaled_value(std::uint64_t x) const {
  std::int64_t s = 0;
  for (const auto& [mask, c] : terms) {
    if ((mask & x) == mask) s += c;
  }
  return s;
}

double PackedPoly::value(std::uint64_t x) const {
  return static_cast<double>(scaled_value(x)) / to_double(scale);
}

std::vector<Assignment> Minima::assignments() const {
  std::vector<Assignment> out;
  out.reserve(masks.size());
  for (auto mask : masks) {
    Assignment z;
    for (std::size_t k = 0; k < vars.size(); ++k) z.emplace(vars[k], static_cast<int>((mask >> k) & 1U));
    out.push_back(std::move(z));
  }
  return out;
}

Minima brute_force_minima(const BoolPoly& a, int cap) {
  const auto packed = PackedPoly::from(a);
  const auto n = static_cast<int>(packed.vars.size());
  if (n > cap) {
    throw TooManyVariables(std::to_string(n) + " variables exceed the brute-force cap of " +
                           std::to_string(cap));
  }
  // Subset-sum (zeta) transform: value[x] = sum of coefficients of monomials inside x.
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::int64_t> value(size, 0);
  for (const auto& [mask, c] : packed.terms) value[mask] += c;
  for (int b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t x = 0; x < size; ++x) {
      if (x & bit) value[x] += value[x ^ bit];
    }
  }
  const auto best = *std::min_element(value.begin(), value.end());
  Minima out;
  out.vars = packed.vars;
  out.value = Rational(best) / packed.scale;
  for (std::size_t x = 0; x < size; ++x) {
    if (value[x] == best) out.masks.push_back(x);
  }
  return out;
}

namespace {

class BranchAndBound {
 public:
  explicit BranchAndBound(const PackedPoly& p) : p_(p), n_(static_cast<int>(p.vars.size())) {}

  void run() { descend(0, 0); }

  std::int64_t best() const { return best_; }
  const std::vector<std::uint64_t>& found() const { return found_; }

 private:
  // Lower bound over all completions of the first k variables set to `bits`.
  std::int64_t lower(int k, std::uint64_t bits) const {
    const std::uint64_t fixed = k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    std::int64_t s = 0;
    for (const auto& [mask, c] : p_.terms) {
      const std::uint64_t set = mask & fixed;
      if ((set & ~bits) != 0) continue;  // some fixed factor is 0
      if (set == mask || c < 0) s += c;
    }
    return s;
  }

  void descend(int k, std::uint64_t bits) {
    const auto lb = lower(k, bits);
    if (lb > best_) return;
    if (k == n_) {
      if (lb < best_) {
        best_ = lb;
        found_.clear();
      }
      found_.push_back(bits);
      return;
    }
    descend(k + 1, bits);
    descend(k + 1, bits | (std::uint64_t{1} << k));
  }

  const PackedPoly& p_;
  int n_;
  std::int64_t best_ = std::numeric_limits<std::int64_t>::max();
  std::vector<std::uint64_t> found_;
};

}  // namespace

Minima exact_minima(const BoolPoly& a, int max_vars) {
  const auto packed = PackedPoly::from(a);
  if (static_cast<int>(packed.vars.size()) > max_vars) {
    throw TooManyVariables(std::to_string(packed.vars.size()) + " variables exceed the cap of " +
                           std::to_string(max_vars));
  }
  BranchAndBound bb(packed);
  bb.run();
  Minima out;
  out.vars = packed.vars;
  out.value = Rational(bb.best()) / packed.scale;
  out.masks = bb.found();
  std::sort(out.masks.begin(), out.masks.end());
  return out;
}

}  // namespace vqf
