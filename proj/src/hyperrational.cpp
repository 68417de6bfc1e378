#include "nsa/hyperrational.hpp"

#include <algorithm>
#include <ostream>

namespace nsa {

// ---------------------------------------------------------------- GenPoly

GenPoly::GenPoly(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.exp > b.exp; });
  for (auto& t : terms) {
    if (!t_.empty() && t_.back().exp == t.exp) {
      t_.back().coef += t.coef;
      if (t_.back().coef.is_zero()) t_.pop_back();
    } else if (!t.coef.is_zero()) {
      t_.push_back(std::move(t));
    }
  }
}

GenPoly GenPoly::monomial(const Rational& coef, const Rational& exp) {
  GenPoly p;
  if (!coef.is_zero()) p.t_.push_back({exp, coef});
  return p;
}

const GenPoly::Term& GenPoly::leading() const {
  if (t_.empty()) fail(ErrorKind::InvalidArgument, "leading term of zero");
  return t_.front();
}

const GenPoly::Term& GenPoly::lowest() const {
  if (t_.empty()) fail(ErrorKind::InvalidArgument, "lowest term of zero");
  return t_.back();
}

GenPoly GenPoly::shifted(const Rational& e) const {
  GenPoly r = *this;
  for (auto& t : r.t_) t.exp += e;
  return r;
}

GenPoly GenPoly::scaled(const Rational& c) const {
  if (c.is_zero()) return {};
  GenPoly r = *this;
  for (auto& t : r.t_) t.coef *= c;
  return r;
}

GenPoly operator+(const GenPoly& a, const GenPoly& b) {
  GenPoly r;
  std::size_t i = 0, j = 0;
  const auto& x = a.t_;
  const auto& y = b.t_;
  r.t_.reserve(x.size() + y.size());
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].exp > y[j].exp)) {
      r.t_.push_back(x[i++]);
    } else if (i == x.size() || y[j].exp > x[i].exp) {
      r.t_.push_back(y[j++]);
    } else {
      Rational c = x[i].coef + y[j].coef;
      if (!c.is_zero()) r.t_.push_back({x[i].exp, c});
      ++i;
      ++j;
    }
  }
  return r;
}

GenPoly operator-(const GenPoly& a, const GenPoly& b) { return a + (-b); }

GenPoly operator*(const GenPoly& a, const GenPoly& b) {
  std::vector<GenPoly::Term> out;
  out.reserve(a.t_.size() * b.t_.size());
  for (const auto& s : a.t_)
    for (const auto& t : b.t_) out.push_back({s.exp + t.exp, s.coef * t.coef});
  return GenPoly(std::move(out));
}

// ---------------------------------------------------------------- canonical form

namespace {

Integer exponent_denominator(const GenPoly& p, Integer d) {
  for (const auto& t : p.terms()) d = lcm(d, t.exp.den());
  return d;
}

// p has lowest exponent 0; exponents times d are integers.
Poly to_poly(const GenPoly& p, const Integer& d) {
  std::size_t deg = (p.degree() * Rational(d)).num().get_ui();
  std::vector<Rational> c(deg + 1);
  for (const auto& t : p.terms()) c[(t.exp * Rational(d)).num().get_ui()] = t.coef;
  return Poly(std::move(c));
}

GenPoly from_poly(const Poly& p, const Integer& d) {
  std::vector<GenPoly::Term> terms;
  const auto& c = p.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) terms.push_back({Rational(Integer(static_cast<unsigned long>(i)), d), c[i]});
  return GenPoly(std::move(terms));
}

bool integer_polynomial(const GenPoly& num, const GenPoly& den) {
  if (!(den.terms().size() == 1 && den.terms()[0].exp.is_zero() && den.terms()[0].coef == Rational(1)))
    return false;
  for (const auto& t : num.terms())
    if (!t.exp.is_integer() || t.exp.sign() < 0 || !t.coef.is_integer()) return false;
  return true;
}

// Coprime in the Laurent ring Q[w^(1/d), w^(-1/d)] (monomials are units).
bool coprime(const GenPoly& p, const GenPoly& q) {
  if (p.terms().size() <= 1 || q.terms().size() <= 1) return true;
  GenPoly a = p.shifted(-p.lowest().exp), b = q.shifted(-q.lowest().exp);
  Integer d = exponent_denominator(b, exponent_denominator(a, 1));
  Poly pa = to_poly(a, d), pb = to_poly(b, d);
  return Poly::coprime_mod_p(pa, pb) || Poly::gcd(pa, pb).degree() == 0;
}

}  // namespace

HyperRational::HyperRational(const Rational& r)
    : num_(GenPoly::constant(r)), den_(GenPoly::constant(1)), int_cert_(r.is_integer()) {}

HyperRational HyperRational::omega_pow(const Rational& e) {
  return fraction(GenPoly::monomial(1, e), GenPoly::constant(1));
}

HyperRational HyperRational::fraction(const GenPoly& num, const GenPoly& den) { return normalize(num, den, true); }

HyperRational HyperRational::normalize(const GenPoly& num, const GenPoly& den, bool reduce) {
  if (den.is_zero()) fail(ErrorKind::DivisionByZero);
  if (num.is_zero()) return HyperRational();
  Rational a = num.lowest().exp, b = den.lowest().exp;
  GenPoly n = num.shifted(-a), d = den.shifted(-b);
  if (reduce && !n.is_constant() && !d.is_constant()) {
    Integer q = exponent_denominator(d, exponent_denominator(n, 1));
    Poly pn = to_poly(n, q), pd = to_poly(d, q);
    Poly g = Poly::coprime_mod_p(pn, pd) ? Poly(1) : Poly::gcd(pn, pd);
    if (g.degree() > 0) {
      n = from_poly(Poly::divmod(pn, g).first, q);
      d = from_poly(Poly::divmod(pd, g).first, q);
    }
  }
  Rational m = a - b;
  if (m.sign() >= 0)
    n = n.shifted(m);
  else
    d = d.shifted(-m);
  Rational inv = d.leading().coef.inverse();
  n = n.scaled(inv);
  d = d.scaled(inv);
  bool cert = integer_polynomial(n, d);
  return HyperRational(std::move(n), std::move(d), cert);
}

Rational HyperRational::as_rational() const {
  if (!is_standard()) fail(ErrorKind::InvalidArgument, "not a standard rational: " + to_string());
  if (num_.is_zero()) return Rational(0);
  return num_.leading().coef / den_.leading().coef;
}

HyperRational HyperRational::reciprocal() const {
  if (is_zero()) fail(ErrorKind::DivisionByZero);
  return normalize(den_, num_, false);
}

HyperRational HyperRational::pow(long k) const {
  if (k < 0) return reciprocal().pow(-k);
  HyperRational result(1), base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

// Both operands are reduced, so coprime denominators (resp. cross factors)
// make the result reduced without a gcd on the product.
HyperRational operator+(const HyperRational& a, const HyperRational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return HyperRational::fraction(a.num_ + b.num_, a.den_);
  bool reduce = !coprime(a.den_, b.den_);
  return HyperRational::normalize(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, reduce);
}

HyperRational operator-(const HyperRational& a, const HyperRational& b) { return a + (-b); }

HyperRational operator*(const HyperRational& a, const HyperRational& b) {
  if (a.is_zero() || b.is_zero()) return HyperRational();
  bool reduce = !coprime(a.num_, b.den_) || !coprime(b.num_, a.den_);
  return HyperRational::normalize(a.num_ * b.num_, a.den_ * b.den_, reduce);
}

HyperRational operator/(const HyperRational& a, const HyperRational& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero);
  return a * b.reciprocal();
}

HyperRational HyperRational::operator-() const { return HyperRational(-num_, den_, int_cert_); }

bool operator==(const HyperRational& a, const HyperRational& b) {
  if (a.num_ == b.num_ && a.den_ == b.den_) return true;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

std::strong_ordering operator<=>(const HyperRational& a, const HyperRational& b) {
  // denominators have positive leading coefficients
  GenPoly diff = a.num_ * b.den_ - b.num_ * a.den_;
  int s = diff.is_zero() ? 0 : diff.leading().coef.sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream& operator<<(std::ostream& os, const HyperRational& x) { return os << x.to_string(); }

// ---------------------------------------------------------------- classification

std::string_view magnitude_name(Magnitude m) {
  switch (m) {
    case Magnitude::Infinitesimal: return "Infinitesimal";
    case Magnitude::FiniteNonInfinitesimal: return "FiniteNonInfinitesimal";
    case Magnitude::Infinite: return "Infinite";
  }
  return "?";
}

Classification classify(const HyperRational& x) {
  if (x.is_zero()) return {Magnitude::Infinitesimal, Rational(0)};
  int c = (x.num().degree() <=> x.den().degree()) < 0 ? -1 : (x.num().degree() == x.den().degree() ? 0 : 1);
  if (c < 0) return {Magnitude::Infinitesimal, Rational(0)};
  if (c > 0) return {Magnitude::Infinite, std::nullopt};
  return {Magnitude::FiniteNonInfinitesimal, x.num().leading().coef / x.den().leading().coef};
}

Rational standard_part(const HyperRational& x) {
  auto c = classify(x);
  if (!c.st) fail(ErrorKind::InfiniteNumber, x.to_string());
  return *c.st;
}

bool infinitely_close(const HyperRational& x, const HyperRational& y) {
  return classify(x - y).kind == Magnitude::Infinitesimal;
}

bool same_galaxy(const HyperRational& x, const HyperRational& y) {
  return classify(x - y).kind != Magnitude::Infinite;
}

HyperRational between_galaxy(const HyperRational& x, const HyperRational& y) {
  if (same_galaxy(x, y)) fail(ErrorKind::SameGalaxy, x.to_string() + " ~ " + y.to_string());
  return (x + y) / HyperRational(2);
}

std::string_view tri_name(Tri t) {
  switch (t) {
    case Tri::No: return "No";
    case Tri::Yes: return "Yes";
    case Tri::Unknown: return "Unknown";
  }
  return "?";
}

bool HInterval::contains(const HyperRational& x) const {
  if (lo) {
    auto c = *lo <=> x;
    if (c > 0 || (c == 0 && lo_open)) return false;
  }
  if (hi) {
    auto c = x <=> *hi;
    if (c > 0 || (c == 0 && hi_open)) return false;
  }
  return true;
}

namespace {

bool in_star_n(const HyperRational& x) { return x.integer_certified() && x.sign() >= 0; }

struct MembershipVisitor {
  const HyperRational& x;
  Tri operator()(const named::MonZero&) const {
    return classify(x).kind == Magnitude::Infinitesimal ? Tri::Yes : Tri::No;
  }
  Tri operator()(const named::GalZero&) const {
    return classify(x).kind != Magnitude::Infinite ? Tri::Yes : Tri::No;
  }
  Tri operator()(const named::StarRPlus&) const { return x.sign() > 0 ? Tri::Yes : Tri::No; }
  Tri operator()(const named::StarNPlusInfinity&) const {
    if (classify(x).kind != Magnitude::Infinite || x.sign() < 0) return Tri::No;
    return x.integer_certified() ? Tri::Yes : Tri::Unknown;
  }
  Tri operator()(const named::InitialSegment& k) const {
    if (x.sign() < 0 || x > k.bound) return Tri::No;
    if (in_star_n(x)) return Tri::Yes;
    if (x.is_standard()) return x.as_rational().is_integer() ? Tri::Yes : Tri::No;
    return Tri::Unknown;
  }
  Tri operator()(const named::IntervalUnion& u) const {
    for (const auto& part : u.parts)
      if (part.contains(x)) return Tri::Yes;
    return Tri::No;
  }
};

struct KindVisitor {
  SetClassification operator()(const named::MonZero&) const { return {SetKind::External, false}; }
  SetClassification operator()(const named::GalZero&) const { return {SetKind::External, false}; }
  SetClassification operator()(const named::StarNPlusInfinity&) const { return {SetKind::External, false}; }
  SetClassification operator()(const named::StarRPlus&) const { return {SetKind::Standard, false}; }
  SetClassification operator()(const named::InitialSegment& k) const {
    return {k.bound.is_standard() ? SetKind::Standard : SetKind::InternalNonstandard, true};
  }
  SetClassification operator()(const named::IntervalUnion& u) const {
    bool standard = true, finite = true;
    for (const auto& p : u.parts) {
      if (p.lo && !p.lo->is_standard()) standard = false;
      if (p.hi && !p.hi->is_standard()) standard = false;
      bool point = p.lo && p.hi && *p.lo == *p.hi && !p.lo_open && !p.hi_open;
      bool empty = p.lo && p.hi && (*p.lo > *p.hi || (*p.lo == *p.hi && (p.lo_open || p.hi_open)));
      if (!point && !empty) finite = false;
    }
    return {standard ? SetKind::Standard : SetKind::InternalNonstandard, finite};
  }
};

}  // namespace

Tri named_membership(const HyperRational& x, const NamedSet& set) {
  return std::visit(MembershipVisitor{x}, set);
}

std::string_view set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::Standard: return "Standard";
    case SetKind::InternalNonstandard: return "InternalNonstandard";
    case SetKind::External: return "External";
  }
  return "?";
}

SetClassification set_classification(const NamedSet& set) { return std::visit(KindVisitor{}, set); }

}  // namespace nsa
