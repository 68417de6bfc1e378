#include "nsa/poly.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "nsa/error.hpp"

namespace nsa {

Poly::Poly(const Rational& c) {
  if (!c.is_zero()) c_.push_back(c);
}

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const Rational& Poly::coeff(std::size_t i) const {
  static const Rational zero;
  return i < c_.size() ? c_[i] : zero;
}

const Rational& Poly::lc() const {
  static const Rational zero;
  return c_.empty() ? zero : c_.back();
}

Rational Poly::eval(const Rational& x) const {
  Rational acc;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
  return Poly(std::move(d));
}

Poly Poly::compose_linear(const Rational& a, const Rational& b) const {
  Poly lin(std::vector<Rational>{b, a});
  return eval_in<Poly>(lin);
}

Poly Poly::monic() const {
  if (c_.empty()) return {};
  Rational inv = lc().inverse();
  std::vector<Rational> v(c_);
  for (auto& c : v) c *= inv;
  return Poly(std::move(v));
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Rational> r(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(r);
  trim();
  return *this;
}

Poly Poly::operator-() const {
  std::vector<Rational> v(c_);
  for (auto& c : v) c = -c;
  return Poly(std::move(v));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Rational> rem(a.c_);
  std::vector<Rational> q(a.c_.size() - b.c_.size() + 1);
  Rational inv = b.lc().inverse();
  for (std::size_t k = q.size(); k-- > 0;) {
    Rational f = rem[k + b.c_.size() - 1] * inv;
    q[k] = f;
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) rem[k + j] -= f * b.c_[j];
  }
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

namespace {

constexpr std::uint64_t kPrime = 2147483647;  // 2^31 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) { return a * b % kPrime; }

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }

std::uint64_t reduce_mod(const Integer& z) {
  Integer m = z % static_cast<unsigned long>(kPrime);
  if (m < 0) m += static_cast<unsigned long>(kPrime);
  return m.get_ui();
}

// Image mod p; empty optional if a denominator vanishes mod p.
std::optional<std::vector<std::uint64_t>> image(const Poly& p) {
  std::vector<std::uint64_t> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    std::uint64_t d = reduce_mod(c.den());
    if (d == 0) return std::nullopt;
    v.push_back(mulmod(reduce_mod(c.num()), invmod(d)));
  }
  return v;
}

void trim_mod(std::vector<std::uint64_t>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

}  // namespace

bool Poly::coprime_mod_p(const Poly& a, const Poly& b) {
  auto ia = image(a), ib = image(b);
  if (!ia || !ib) return false;
  // leading coefficients must survive reduction for the image degree to be meaningful
  if (ia->size() != a.coeffs().size() || ib->size() != b.coeffs().size()) return false;
  auto x = std::move(*ia), y = std::move(*ib);
  trim_mod(x);
  trim_mod(y);
  while (!y.empty()) {
    if (x.size() >= y.size()) {
      std::uint64_t inv = invmod(y.back());
      while (x.size() >= y.size()) {
        std::uint64_t f = mulmod(x.back(), inv);
        std::size_t off = x.size() - y.size();
        for (std::size_t j = 0; j < y.size(); ++j) x[off + j] = (x[off + j] + kPrime - mulmod(f, y[j])) % kPrime;
        trim_mod(x);
        if (x.empty()) break;
      }
    }
    std::swap(x, y);
  }
  return x.size() == 1;
}

std::string Poly::to_csv() const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ",";
    out += c_[i].to_string();
  }
  return out;
}

Poly Poly::from_csv(const std::string& text) {
  std::vector<Rational> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(Rational::parse(item));
  if (v.empty()) fail(ErrorKind::ParseError, "empty coefficient list");
  return Poly(std::move(v));
}

std::string Poly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Rational& c = c_[i];
    if (c.is_zero()) continue;
    Rational mag = c.abs();
    if (out.empty()) {
      if (c.sign() < 0) out += "-";
    } else {
      out += c.sign() < 0 ? " - " : " + ";
    }
    bool unit = mag == Rational(1);
    if (i == 0 || !unit) out += mag.to_string();
    if (i > 0) {
      if (!unit) out += "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

Poly squarefree_part(const Poly& p) {
  if (p.degree() <= 0) return p.is_zero() ? p : Poly(1);
  Poly g = Poly::gcd(p, p.derivative());
  return Poly::divmod(p, g).first.monic();
}

Poly odd_multiplicity_part(const Poly& p) {
  if (p.degree() <= 0) return Poly(1);
  Poly f = p.monic();
  Poly fd = f.derivative();
  Poly a0 = Poly::gcd(f, fd);
  Poly b = Poly::divmod(f, a0).first;
  Poly c = Poly::divmod(fd, a0).first;
  Poly d = c - b.derivative();
  Poly odd(1);
  for (int i = 1; b.degree() > 0; ++i) {
    Poly a = Poly::gcd(b, d);
    if (i % 2 == 1) odd *= a;
    b = Poly::divmod(b, a).first;
    c = Poly::divmod(d, a).first;
    d = c - b.derivative();
  }
  return odd.monic();
}

std::vector<Poly> sturm_sequence(const Poly& p) {
  std::vector<Poly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    Poly r = Poly::divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  if (seq.back().is_zero()) seq.pop_back();
  return seq;
}

namespace {

int variations(const std::vector<Poly>& seq, const Rational& x) {
  int count = 0, last = 0;
  for (const auto& q : seq) {
    int s = q.eval(x).sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int variations_at_infinity(const std::vector<Poly>& seq, int side) {
  int count = 0, last = 0;
  for (const auto& q : seq) {
    if (q.is_zero()) continue;
    int s = q.lc().sign();
    if (side < 0 && q.degree() % 2 == 1) s = -s;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace

int count_roots_open(const Poly& p, const Rational& a, const Rational& b) {
  if (!(a < b) || p.degree() <= 0) return 0;
  Poly q = squarefree_part(p);
  auto seq = sturm_sequence(q);
  int n = variations(seq, a) - variations(seq, b);
  if (q.eval(b).is_zero()) --n;
  return n;
}

int count_real_roots(const Poly& p) {
  if (p.degree() <= 0) return 0;
  auto seq = sturm_sequence(squarefree_part(p));
  return variations_at_infinity(seq, -1) - variations_at_infinity(seq, 1);
}

Rational cauchy_root_bound(const Poly& p) {
  if (p.degree() <= 0) return Rational(1);
  Rational m;
  for (int i = 0; i < p.degree(); ++i) {
    Rational r = (p.coeff(i) / p.lc()).abs();
    if (r > m) m = r;
  }
  return m + 1;
}

std::vector<Rational> rational_roots(const Poly& p) {
  std::vector<Rational> roots;
  if (p.degree() <= 0) return roots;
  Poly q = squarefree_part(p);
  // Scale to a primitive integer polynomial to bound root denominators by |lc|.
  Integer den = 1;
  for (const auto& c : q.coeffs()) den = lcm(den, c.den());
  Integer g = 0;
  for (const auto& c : q.coeffs()) g = gcd(g, (c * Rational(den)).num());
  Rational lead = q.lc() * Rational(den) / Rational(g);
  Rational inv_lead = lead.abs().inverse();

  auto seq = sturm_sequence(q);
  auto count = [&](const Rational& a, const Rational& b) {
    int n = variations(seq, a) - variations(seq, b);
    if (q.eval(b).is_zero()) --n;
    return n;
  };
  Rational bound = cauchy_root_bound(q);

  struct Range { Rational lo, hi; int n; };
  std::vector<Range> todo{{-bound, bound, count(-bound, bound)}};
  while (!todo.empty()) {
    Range r = todo.back();
    todo.pop_back();
    if (r.n == 0) continue;
    if (r.n == 1 && (r.hi - r.lo) < inv_lead) {
      // at most one fraction k/|lead| inside
      Rational scaled = r.lo / inv_lead;
      Integer k = scaled.floor() + 1;
      Rational cand = Rational(k) * inv_lead;
      if (cand < r.hi && q.eval(cand).is_zero()) roots.push_back(cand);
      continue;
    }
    Rational mid = (r.lo + r.hi) / 2;
    if (q.eval(mid).is_zero()) roots.push_back(mid);
    todo.push_back({r.lo, mid, count(r.lo, mid)});
    todo.push_back({mid, r.hi, count(mid, r.hi)});
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<Integer> integer_roots_from(const Poly& p, const Integer& from) {
  std::vector<Integer> out;
  for (const auto& r : rational_roots(p))
    if (r.is_integer() && r.num() >= from) out.push_back(r.num());
  return out;
}

bool nonnegative_on(const Poly& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) return true;
  if (b < a) return true;
  if (a == b) return p.eval(a).sign() >= 0;
  if (p.eval(a).sign() < 0 || p.eval(b).sign() < 0) return false;
  Poly odd = odd_multiplicity_part(p);
  if (count_roots_open(odd, a, b) > 0) return false;
  // constant sign on (a, b) apart from isolated zeros
  Rational lo = a, hi = b;
  for (int i = 0; i <= p.degree() + 1; ++i) {
    Rational mid = (lo + hi) / 2;
    int s = p.eval(mid).sign();
    if (s != 0) return s > 0;
    hi = mid;
  }
  return true;
}

Rational bernoulli_plus(unsigned k) {
  static std::vector<Rational> b{Rational(1)};
  while (b.size() <= k) {
    unsigned m = static_cast<unsigned>(b.size());
    Rational s;
    for (unsigned j = 0; j < m; ++j) s += Rational(binomial(m + 1, j)) * b[j];
    b.push_back(-s / Rational(static_cast<long>(m + 1)));
  }
  if (k == 1) return Rational(1, 2);
  return b[k];
}

const Poly& power_sum(unsigned m) {
  static std::map<unsigned, Poly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<Rational> c(m + 2);
  for (unsigned k = 0; k <= m; ++k)
    c[m + 1 - k] = Rational(binomial(m + 1, k)) * bernoulli_plus(k) / Rational(static_cast<long>(m + 1));
  return cache.emplace(m, Poly(std::move(c))).first->second;
}

}  // namespace nsa
