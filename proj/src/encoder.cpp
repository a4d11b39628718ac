#include "vqf/encoder.hpp"

#include "vqf/errors.hpp"
#include "vqf/poly_io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

namespace vqf {

void FactoringInstance::validate() const {
  if (n < 9 || n % 2 == 0) throw InfeasibleInstance("N must be odd and at least 9, got " + std::to_string(n));
  if (bit_length < 2) throw InfeasibleInstance("bit length must be at least 2");
  if (bit_length > 31) throw InfeasibleInstance("bit length above 31 is not supported");
  const int width = std::bit_width(n);
  const int lo = msb_lsb_fixed ? 2 * bit_length - 1 : 1;
  if (width < lo || width > 2 * bit_length) {
    throw InfeasibleInstance("N has " + std::to_string(width) + " bits, inconsistent with two " +
                             std::to_string(bit_length) + "-bit multipliers");
  }
}

void ClauseSystem::collect_free_vars() {
  std::set<Var> vs;
  for (const auto& c : clauses) {
    for (const auto& v : c.variables()) vs.insert(v);
  }
  free_vars.assign(vs.begin(), vs.end());
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> ClauseSystem::decode_factors(const Assignment& z) const {
  if (!instance) return std::nullopt;
  auto bit = [&](const Var& v) -> std::optional<int> {
    FixTarget t = fixes.resolve(v);
    if (const int* c = std::get_if<int>(&t)) return *c;
    const auto& a = std::get<Alias>(t);
    auto it = z.find(a.var);
    if (it == z.end()) return std::nullopt;
    return a.negated ? 1 - it->second : it->second;
  };
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  for (int i = 0; i < instance->bit_length; ++i) {
    auto pb = bit(Var::p(i));
    auto qb = bit(Var::q(i));
    if (!pb || !qb) return std::nullopt;
    p |= static_cast<std::uint64_t>(*pb) << i;
    q |= static_cast<std::uint64_t>(*qb) << i;
  }
  return std::make_pair(p, q);
}

ClauseSystem build_clauses(const FactoringInstance& inst) {
  inst.validate();
  const int L = inst.bit_length;
  const int columns = 2 * L;
  std::vector<std::vector<Var>> incoming(columns);

  ClauseSystem cs;
  cs.instance = inst;
  if (inst.msb_lsb_fixed) {
    cs.fixes.add(Var::p(0), 1);
    cs.fixes.add(Var::q(0), 1);
    cs.fixes.add(Var::p(L - 1), 1);
    cs.fixes.add(Var::q(L - 1), 1);
  }

  for (int k = 0; k < columns; ++k) {
    BoolPoly lhs;
    int max_sum = 0;
    for (int i = std::max(0, k - L + 1); i <= std::min(k, L - 1); ++i) {
      lhs += var(Var::p(i)) * var(Var::q(k - i));
      ++max_sum;
    }
    for (const auto& z : incoming[k]) {
      lhs += var(z);
      ++max_sum;
    }
    const int target = static_cast<int>((inst.n >> k) & 1U);
    // Outgoing carries z_{k,k+t}, t = 1..T, must be able to absorb max_sum - target.
    int carries = 0;
    while ((1 << (carries + 1)) - 2 < max_sum - target) ++carries;
    carries = std::min(carries, columns - 1 - k);

    BoolPoly clause = lhs - BoolPoly(target);
    for (int t = 1; t <= carries; ++t) {
      const Var z = Var::carry(k, k + t);
      clause -= Rational(1 << t) * var(z);
      incoming[k + t].push_back(z);
    }
    clause = substitute(clause, cs.fixes);
    if (clause.is_zero()) continue;
    if (clause.degree() == 0) {
      throw InfeasibleInstance("column " + std::to_string(k) + " reduces to a nonzero constant");
    }
    cs.clauses.push_back(std::move(clause));
  }
  cs.collect_free_vars();
  return cs;
}

BoolPoly cost_function(const ClauseSystem& cs) {
  BoolPoly out;
  for (const auto& c : cs.clauses) out += square(c);
  return out;
}

// ---------------------------------------------------------------------------
// Preprocessing

namespace {

// Integer image of a clause system over indexed variables, for fast probing.
class Propagator {
 public:
  struct Term {
    std::vector<int> vars;
    std::int64_t coeff;
  };
  struct Clause {
    std::vector<Term> terms;
    std::int64_t constant = 0;
  };

  explicit Propagator(const std::vector<BoolPoly>& clauses) {
    std::set<Var> vs;
    for (const auto& c : clauses) {
      for (const auto& v : c.variables()) vs.insert(v);
    }
    vars_.assign(vs.begin(), vs.end());
    for (const auto& c : clauses) {
      const auto packed = PackedPoly::from(c, c.variables());
      Clause cl;
      for (const auto& [mask, coeff] : packed.terms) {
        if (mask == 0) {
          cl.constant += coeff;
          continue;
        }
        Term t{{}, coeff};
        for (std::size_t b = 0; b < packed.vars.size(); ++b) {
          if ((mask >> b) & 1U) t.vars.push_back(index_of(packed.vars[b]));
        }
        cl.terms.push_back(std::move(t));
      }
      clauses_.push_back(std::move(cl));
    }
  }

  const std::vector<Var>& vars() const { return vars_; }
  int size() const { return static_cast<int>(vars_.size()); }

  int index_of(const Var& v) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
    return static_cast<int>(it - vars_.begin());
  }

  bool has_product(int x, int y) const {
    for (const auto& cl : clauses_) {
      for (const auto& t : cl.terms) {
        bool hx = std::find(t.vars.begin(), t.vars.end(), x) != t.vars.end();
        bool hy = std::find(t.vars.begin(), t.vars.end(), y) != t.vars.end();
        if (hx && hy) return true;
      }
    }
    return false;
  }

  // Bound checks and tight-bound forcing to a fixpoint. Returns false on a
  // contradiction. `a` holds -1 (unknown), 0 or 1 per variable.
  bool propagate(std::vector<signed char>& a) const {
    bool changed = true;
    std::vector<std::pair<int, signed char>> forced;
    while (changed) {
      changed = false;
      for (const auto& cl : clauses_) {
        std::int64_t lo = cl.constant;
        std::int64_t hi = cl.constant;
        for (const auto& t : cl.terms) {
          switch (status(t, a)) {
            case kOff:
              break;
            case kOn:
              lo += t.coeff;
              hi += t.coeff;
              break;
            default:
              (t.coeff > 0 ? hi : lo) += t.coeff;
          }
        }
        if (lo > 0 || hi < 0) return false;
        if (lo != 0 && hi != 0) continue;
        // The clause can only vanish at an extreme: every open term is forced.
        forced.clear();
        for (const auto& t : cl.terms) {
          if (status(t, a) != kOpen) continue;
          const bool on = (lo == 0) == (t.coeff < 0);
          if (on) {
            for (int v : t.vars) {
              if (a[v] < 0) forced.emplace_back(v, 1);
            }
          } else {
            int open = -1;
            int count = 0;
            for (int v : t.vars) {
              if (a[v] < 0) {
                open = v;
                ++count;
              }
            }
            if (count == 1) forced.emplace_back(open, 0);
          }
        }
        for (auto [v, val] : forced) {
          if (a[v] >= 0) {
            if (a[v] != val) return false;
            continue;
          }
          a[v] = val;
          changed = true;
        }
      }
    }
    return true;
  }

 private:
  enum Status { kOff, kOn, kOpen };

  static Status status(const Term& t, const std::vector<signed char>& a) {
    bool open = false;
    for (int v : t.vars) {
      if (a[v] == 0) return kOff;
      if (a[v] < 0) open = true;
    }
    return open ? kOpen : kOn;
  }

  std::vector<Var> vars_;
  std::vector<Clause> clauses_;
};

bool feasible_with(const Propagator& prop, std::vector<signed char> a,
                   std::initializer_list<std::pair<int, int>> trial) {
  for (auto [v, val] : trial) {
    if (a[v] >= 0 && a[v] != val) return false;
    a[v] = static_cast<signed char>(val);
  }
  return prop.propagate(a);
}

// Drops zero clauses, rejects nonzero constants, makes the leading coefficient
// positive and removes duplicates.
void normalize(ClauseSystem& cs) {
  std::vector<BoolPoly> out;
  for (auto& c : cs.clauses) {
    c = substitute(c, cs.fixes);
    if (c.is_zero()) continue;
    if (c.degree() == 0) throw InfeasibleInstance("clause reduced to nonzero constant " + format_expression(c));
    for (const auto& [m, coeff] : c.terms()) {
      if (m.is_constant()) continue;
      if (coeff < 0) c = -c;
      break;
    }
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  }
  cs.clauses = std::move(out);
}

BoolPoly drop_product(const BoolPoly& c, const Var& x, const Var& y) {
  BoolPoly out;
  for (const auto& [m, coeff] : c.terms()) {
    if (m.contains(x) && m.contains(y)) continue;
    out.add_term(m, coeff);
  }
  return out;
}

struct ProbeOutcome {
  std::vector<signed char> assignment;
  std::vector<std::pair<int, int>> zero_products;
};

ProbeOutcome run_probing(const Propagator& prop, int depth) {
  const int n = prop.size();
  ProbeOutcome out;
  auto& a = out.assignment;
  a.assign(n, -1);
  if (!prop.propagate(a)) throw InfeasibleInstance("clause bounds exclude zero");

  auto fix = [&](int v, int val) {
    a[v] = static_cast<signed char>(val);
    if (!prop.propagate(a)) throw InfeasibleInstance("probing derived a contradiction");
  };

  bool changed = true;
  while (changed) {
    changed = false;
    if (depth >= 1) {
      for (int x = 0; x < n; ++x) {
        if (a[x] >= 0) continue;
        const bool ok0 = feasible_with(prop, a, {{x, 0}});
        const bool ok1 = feasible_with(prop, a, {{x, 1}});
        if (!ok0 && !ok1) throw InfeasibleInstance("no value of " + prop.vars()[x].name() + " is feasible");
        if (ok0 != ok1) {
          fix(x, ok1 ? 1 : 0);
          changed = true;
        }
      }
    }
    if (changed || depth < 2) continue;
    out.zero_products.clear();
    for (int x = 0; x < n && !changed; ++x) {
      if (a[x] >= 0) continue;
      for (int y = x + 1; y < n; ++y) {
        if (a[x] >= 0) break;
        if (a[y] >= 0) continue;
        bool ok[2][2];
        for (int vx = 0; vx < 2; ++vx) {
          for (int vy = 0; vy < 2; ++vy) ok[vx][vy] = feasible_with(prop, a, {{x, vx}, {y, vy}});
        }
        for (int v = 0; v < 2; ++v) {
          if (!ok[v][0] && !ok[v][1] && a[x] < 0) {
            fix(x, 1 - v);
            changed = true;
          }
          if (!ok[0][v] && !ok[1][v] && a[y] < 0) {
            fix(y, 1 - v);
            changed = true;
          }
        }
        if (changed) break;
        if (!ok[1][1] && prop.has_product(x, y)) out.zero_products.emplace_back(x, y);
      }
    }
  }
  return out;
}

}  // namespace

ClauseSystem preprocess(const ClauseSystem& input, int probe_depth) {
  if (probe_depth < 0 || probe_depth > 2) throw InvalidConfig("probe depth must be 0, 1 or 2");
  ClauseSystem cs = input;
  normalize(cs);

  while (true) {
    const Propagator prop(cs.clauses);
    const auto outcome = run_probing(prop, probe_depth);
    bool fixed_any = false;
    for (int v = 0; v < prop.size(); ++v) {
      if (outcome.assignment[v] >= 0) {
        cs.fixes.add(prop.vars()[v], static_cast<int>(outcome.assignment[v]));
        fixed_any = true;
      }
    }
    normalize(cs);
    if (fixed_any) continue;

    // Remove products proven zero, keeping a removal only if the product is
    // still excluded by the reduced system.
    bool removed_any = false;
    for (auto [xi, yi] : outcome.zero_products) {
      const Var& x = prop.vars()[xi];
      const Var& y = prop.vars()[yi];
      ClauseSystem trial = cs;
      for (auto& c : trial.clauses) c = drop_product(c, x, y);
      normalize(trial);
      const Propagator check(trial.clauses);
      const auto vs = check.vars();
      const bool both_present = std::binary_search(vs.begin(), vs.end(), x) &&
                                std::binary_search(vs.begin(), vs.end(), y);
      if (!both_present) continue;
      std::vector<signed char> base(check.size(), -1);
      if (!check.propagate(base)) continue;
      if (feasible_with(check, base, {{check.index_of(x), 1}, {check.index_of(y), 1}})) continue;
      cs = std::move(trial);
      removed_any = true;
      break;
    }
    if (!removed_any) break;
  }

  // Keep variables that were free before and are neither fixed nor gone.
  std::set<Var> vs;
  for (const auto& c : cs.clauses) {
    for (const auto& v : c.variables()) vs.insert(v);
  }
  for (const auto& v : input.free_vars) {
    if (!cs.fixes.contains(v)) vs.insert(v);
  }
  cs.free_vars.assign(vs.begin(), vs.end());
  return cs;
}

// ---------------------------------------------------------------------------
// Clause files

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

FixTarget parse_fix_target(const std::string& rhs, int lineno) {
  const BoolPoly t = parse_expression(rhs, lineno);
  if (t.degree() == 0) {
    const Rational c = t.constant();
    if (c != 0 && c != 1) throw ParseError(lineno, "fix value must be 0 or 1");
    return c == 1 ? 1 : 0;
  }
  const auto vs = t.variables();
  if (t.degree() != 1 || vs.size() != 1) throw ParseError(lineno, "fix target must be 0, 1, v or 1 - v");
  const Monomial m{vs.front()};
  if (t == var(vs.front())) return Alias{vs.front(), false};
  if (t == BoolPoly(1) - var(vs.front())) return Alias{vs.front(), true};
  (void)m;
  throw ParseError(lineno, "fix target must be 0, 1, v or 1 - v");
}

}  // namespace

ClauseSystem parse_clause_text(const std::string& text) {
  ClauseSystem cs;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::optional<std::vector<Var>> declared;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '@') {
      std::istringstream ds(line.substr(1));
      std::string kw;
      ds >> kw;
      std::string rest;
      std::getline(ds, rest);
      rest = trim(rest);
      if (kw == "instance") {
        FactoringInstance inst;
        std::istringstream kv(rest);
        std::string item;
        while (kv >> item) {
          auto eq = item.find('=');
          if (eq == std::string::npos) throw ParseError(lineno, "expected key=value in @instance");
          const auto key = item.substr(0, eq);
          const auto val = item.substr(eq + 1);
          try {
            if (key == "n") {
              inst.n = std::stoull(val);
            } else if (key == "bits") {
              inst.bit_length = std::stoi(val);
            } else if (key == "msb_lsb_fixed") {
              inst.msb_lsb_fixed = std::stoi(val) != 0;
            } else {
              throw ParseError(lineno, "unknown @instance key '" + key + "'");
            }
          } catch (const std::logic_error&) {
            throw ParseError(lineno, "malformed value for '" + key + "'");
          }
        }
        cs.instance = inst;
      } else if (kw == "fix") {
        auto eq = rest.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected '@fix var = target'");
        const auto name = trim(rest.substr(0, eq));
        Var v;
        try {
          v = Var::named(name);
        } catch (const Error& e) {
          throw ParseError(lineno, e.what());
        }
        try {
          cs.fixes.add(v, parse_fix_target(rest.substr(eq + 1), lineno));
        } catch (const ConflictingFix& e) {
          throw ParseError(lineno, e.what());
        }
      } else if (kw == "vars") {
        std::istringstream vs(rest);
        std::string name;
        declared.emplace();
        while (vs >> name) {
          try {
            declared->push_back(Var::named(name));
          } catch (const Error& e) {
            throw ParseError(lineno, e.what());
          }
        }
      } else {
        throw ParseError(lineno, "unknown directive '@" + kw + "'");
      }
      continue;
    }
    cs.clauses.push_back(parse_expression(line, lineno));
  }
  cs.collect_free_vars();
  if (declared) {
    std::set<Var> all(cs.free_vars.begin(), cs.free_vars.end());
    all.insert(declared->begin(), declared->end());
    cs.free_vars.assign(all.begin(), all.end());
  }
  return cs;
}

ClauseSystem load_clause_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open clause file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_clause_text(ss.str());
}

std::string format_clause_text(const ClauseSystem& cs) {
  std::ostringstream out;
  if (cs.instance) {
    out << "@instance n=" << cs.instance->n << " bits=" << cs.instance->bit_length
        << " msb_lsb_fixed=" << (cs.instance->msb_lsb_fixed ? 1 : 0) << '\n';
  }
  for (const auto& [v, t] : cs.fixes.map()) {
    out << "@fix " << v.name() << " = ";
    if (const int* c = std::get_if<int>(&t)) {
      out << *c;
    } else {
      const auto& a = std::get<Alias>(t);
      out << (a.negated ? "1 - " : "") << a.var.name();
    }
    out << '\n';
  }
  out << "@vars";
  for (const auto& v : cs.free_vars) out << ' ' << v.name();
  out << '\n';
  for (const auto& c : cs.clauses) out << format_expression(c) << '\n';
  return out.str();
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> solution_factor_pairs(const ClauseSystem& cs,
                                                                           const Minima& minima) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (const auto& z : minima.assignments()) {
    Assignment full = z;
    for (const auto& v : cs.free_vars) full.try_emplace(v, 0);
    if (auto pq = cs.decode_factors(full)) pairs.insert(*pq);
  }
  return {pairs.begin(), pairs.end()};
}

}  // namespace vqf
