#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nsa/rational.hpp"

namespace nsa {

/// Dense univariate polynomial over Q, coefficients in ascending degree.
/// The zero polynomial has no coefficients; the leading coefficient is never 0.
class Poly {
 public:
  Poly() = default;
  Poly(const Rational& c);  // NOLINT: constants convert implicitly
  Poly(int c) : Poly(Rational(c)) {}  // NOLINT
  explicit Poly(std::vector<Rational> coeffs);

  static Poly x() { return Poly(std::vector<Rational>{0, 1}); }
  static Poly monomial(const Rational& c, std::size_t degree);

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(std::size_t i) const;
  const Rational& lc() const;
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_constant() const { return c_.size() <= 1; }

  Rational eval(const Rational& x) const;

  /// Horner evaluation in any ring T that accepts Rational constants.
  template <class T>
  T eval_in(const T& x) const {
    if (c_.empty()) return T(Rational(0));
    T acc(c_.back());
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + T(c_[i]);
    return acc;
  }

  Poly derivative() const;
  /// p(x) -> p(a*x + b)
  Poly compose_linear(const Rational& a, const Rational& b) const;
  Poly monic() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Polynomial long division; throws DivisionByZero for a zero divisor.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  /// Monic gcd (zero if both are zero).
  static Poly gcd(const Poly& a, const Poly& b);
  /// True only when a and b are proven coprime by a modular image; false means "unknown".
  static bool coprime_mod_p(const Poly& a, const Poly& b);

  /// Ascending-coefficient text, e.g. "0,0,1".
  std::string to_csv() const;
  static Poly from_csv(const std::string& text);
  /// Human rendering in the variable `var`.
  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Square-free part p / gcd(p, p').
Poly squarefree_part(const Poly& p);
/// Product of the square-free factors of odd multiplicity (Yun).
Poly odd_multiplicity_part(const Poly& p);

/// Sturm sequence of a square-free polynomial.
std::vector<Poly> sturm_sequence(const Poly& p);
/// Number of distinct real roots of p in the open interval (a, b).
int count_roots_open(const Poly& p, const Rational& a, const Rational& b);
/// Number of distinct real roots of p (all of R).
int count_real_roots(const Poly& p);

/// All rational roots (distinct, ascending).
std::vector<Rational> rational_roots(const Poly& p);
/// Nonnegative integer roots n >= from, ascending.
std::vector<Integer> integer_roots_from(const Poly& p, const Integer& from);

/// p >= 0 on the closed interval [a, b].
bool nonnegative_on(const Poly& p, const Rational& a, const Rational& b);

/// Cauchy bound: every real root has |r| < bound.
Rational cauchy_root_bound(const Poly& p);

/// S_m(N) = sum_{l=1}^{N} l^m as a polynomial in N.
const Poly& power_sum(unsigned m);
/// Bernoulli numbers with B_1 = +1/2.
Rational bernoulli_plus(unsigned k);

}  // namespace nsa
