#include "vqf/poly_io.hpp"

#include "vqf/errors.hpp"

#include <cctype>
#include <sstream>

namespace vqf {

namespace {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, int line) : s_(text), line_(line) {}

  BoolPoly parse_clause() {
    BoolPoly lhs = expression();
    skip_ws();
    if (peek() == '=') {
      ++pos_;
      BoolPoly rhs = expression();
      lhs -= rhs;
    }
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return lhs;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, what + " at column " + std::to_string(pos_ + 1));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  BoolPoly expression() {
    BoolPoly out;
    bool first = true;
    while (true) {
      char c = peek();
      Rational sign = 1;
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      out += sign * term();
      first = false;
    }
    return out;
  }

  static bool starts_factor(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(' || c == '.';
  }

  BoolPoly term() {
    BoolPoly t = factor();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        t *= factor();
      } else if (starts_factor(c)) {
        t *= factor();
      } else {
        return t;
      }
    }
  }

  BoolPoly factor() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      BoolPoly inner = expression();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  BoolPoly number() {
    std::string whole = digits();
    Rational value = whole.empty() ? Rational(0) : Rational(boost::multiprecision::cpp_int(whole));
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::string frac = digits();
      if (whole.empty() && frac.empty()) fail("malformed number");
      if (!frac.empty()) {
        boost::multiprecision::cpp_int den = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                        static_cast<unsigned>(frac.size()));
        value += Rational(boost::multiprecision::cpp_int(frac), den);
      }
    } else if (whole.empty()) {
      fail("malformed number");
    }
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      std::string den = digits();
      if (den.empty()) fail("malformed fraction");
      boost::multiprecision::cpp_int d(den);
      if (d == 0) fail("zero denominator");
      value /= Rational(d);
    }
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      fail("malformed coefficient");
    }
    return BoolPoly(value);
  }

  BoolPoly identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    try {
      return var(Var::named(s_.substr(start, pos_ - start)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

std::string monomial_text(const Monomial& m) {
  std::string s;
  for (const auto& v : m.vars()) {
    if (!s.empty()) s += '*';
    s += v.name();
  }
  return s;
}

std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

bool blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::string format_rational(const Rational& r) { return r.str(); }

BoolPoly parse_expression(std::string_view text, int line) {
  return ExpressionParser(text, line).parse_clause();
}

std::string format_expression(const BoolPoly& a) {
  if (a.is_zero()) return "0";
  std::string out;
  auto emit = [&](const Monomial& m, const Rational& c) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (m.is_constant()) {
      out += format_rational(mag);
    } else if (mag == 1) {
      out += monomial_text(m);
    } else {
      out += format_rational(mag) + "*" + monomial_text(m);
    }
  };
  for (const auto& [m, c] : a.terms()) {
    if (!m.is_constant()) emit(m, c);
  }
  if (auto c = a.constant(); c != 0) emit(Monomial{}, c);
  return out;
}

BoolPoly parse_poly_text(std::string_view text) {
  BoolPoly out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = strip_comment(line);
    if (blank(body)) continue;
    out += parse_expression(body, lineno);
  }
  return out;
}

std::string format_poly_text(const BoolPoly& a) {
  std::string out;
  auto line = [&](const Monomial& m, const Rational& c) {
    out += format_rational(c);
    if (!m.is_constant()) out += " * " + monomial_text(m);
    out += '\n';
  };
  if (auto c = a.constant(); c != 0) line(Monomial{}, c);
  for (const auto& [m, c] : a.terms()) {
    if (!m.is_constant()) line(m, c);
  }
  return out;
}

}  // namespace vqf
