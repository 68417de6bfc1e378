#pragma once

#include <gmpxx.h>

#include <compare>
#include <functional>
#include <cstddef>
#include <string>
#include <string_view>

namespace nsa {

using Integer = mpz_class;

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT: integers convert implicitly
  Rational(int v) : v_(v) {}   // NOLINT
  Rational(const Integer& v) : v_(v) {}  // NOLINT
  Rational(const Integer& num, const Integer& den);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  /// Accepts "p", "-p", "p/q". Throws ParseError otherwise.
  static Rational parse(std::string_view text);

  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Integer floor() const;
  Integer ceil() const;
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational inverse() const;

  const mpq_class& raw() const { return v_; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const;
  std::size_t hash() const;

 private:
  mpq_class v_;
};

Rational pow(const Rational& base, long exponent);
Integer lcm(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);
Integer binomial(unsigned long n, unsigned long k);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace nsa

template <>
struct std::hash<nsa::Rational> {
  std::size_t operator()(const nsa::Rational& r) const { return r.hash(); }
};
