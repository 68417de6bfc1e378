#include <cctype>
#include <string>

#include "nsa/hyperrational.hpp"

namespace nsa {

namespace {

std::string render_term(const GenPoly::Term& t, bool first) {
  std::string s;
  Rational mag = t.coef.abs();
  if (first)
    s += t.coef.sign() < 0 ? "-" : "";
  else
    s += t.coef.sign() < 0 ? " - " : " + ";
  if (t.exp.is_zero()) return s + mag.to_string();
  if (mag != Rational(1)) s += mag.to_string() + "*";
  s += "w";
  if (t.exp != Rational(1)) {
    if (t.exp.is_integer() && t.exp.sign() > 0)
      s += "^" + t.exp.to_string();
    else
      s += "^(" + t.exp.to_string() + ")";
  }
  return s;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  HyperRational parse() {
    HyperRational v = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::ParseError, what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  HyperRational expr() {
    HyperRational v = term();
    for (;;) {
      if (eat('+'))
        v = v + term();
      else if (eat('-'))
        v = v - term();
      else
        return v;
    }
  }

  HyperRational term() {
    HyperRational v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        HyperRational d = unary();
        if (d.is_zero()) fail(ErrorKind::DivisionByZero, "at position " + std::to_string(pos_));
        v = v / d;
      } else {
        return v;
      }
    }
  }

  HyperRational unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  HyperRational power() {
    HyperRational base = primary();
    if (!eat('^')) return base;
    Rational e = exponent();
    if (e.is_integer()) {
      if (base.is_zero() && e.sign() < 0) fail(ErrorKind::DivisionByZero, "at position " + std::to_string(pos_));
      return base.pow(e.num().get_si());
    }
    // fractional powers only of pure w powers
    const auto& n = base.num().terms();
    const auto& d = base.den().terms();
    if (n.size() == 1 && d.size() == 1 && n[0].coef == Rational(1) && d[0].coef == Rational(1))
      return HyperRational::omega_pow((n[0].exp - d[0].exp) * e);
    error("fractional power of a non-monomial");
  }

  Rational exponent() {
    skip();
    bool neg = eat('-');
    if (eat('(')) {
      bool inner_neg = eat('-');
      Integer p = integer();
      Integer q = 1;
      if (eat('/')) q = integer();
      if (!eat(')')) error("expected ')'");
      if (q == 0) error("zero exponent denominator");
      Rational r(p, q);
      if (inner_neg) r = -r;
      return neg ? -r : r;
    }
    Rational r(integer());
    return neg ? -r : r;
  }

  Integer integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected integer");
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }

  HyperRational primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      HyperRational v = expr();
      if (!eat(')')) error("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return HyperRational(Rational(integer()));
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string_view word = s_.substr(start, pos_ - start);
      if (word == "w" || word == "omega") return HyperRational::omega();
      if (word == "eps" || word == "epsilon") return HyperRational::epsilon();
      pos_ = start;
      error("unknown symbol '" + std::string(word) + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string render_genpoly(const GenPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    out += render_term(t, first);
    first = false;
  }
  return out;
}

std::string HyperRational::to_string() const {
  std::string n = render_genpoly(num_);
  if (den_ == GenPoly::constant(1)) return n;
  std::string d = render_genpoly(den_);
  if (num_.terms().size() > 1) n = "(" + n + ")";
  if (den_.terms().size() > 1 || den_.terms()[0].coef != Rational(1)) d = "(" + d + ")";
  return n + " / " + d;
}

HyperRational parse_hyper(std::string_view text) { return Parser(text).parse(); }

}  // namespace nsa
