#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nsa/error.hpp"
#include "nsa/poly.hpp"
#include "nsa/rational.hpp"

namespace nsa {

/// Finite sum of c * w^e with rational exponents, strictly decreasing e, nonzero c.
class GenPoly {
 public:
  struct Term {
    Rational exp;
    Rational coef;
    friend bool operator==(const Term&, const Term&) = default;
  };

  GenPoly() = default;
  explicit GenPoly(std::vector<Term> terms);
  static GenPoly constant(const Rational& c) { return monomial(c, Rational(0)); }
  static GenPoly monomial(const Rational& coef, const Rational& exp);

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].exp.is_zero()); }
  const Term& leading() const;
  const Term& lowest() const;
  /// Exponent of the leading term; InvalidArgument for zero.
  const Rational& degree() const { return leading().exp; }

  GenPoly shifted(const Rational& e) const;
  GenPoly scaled(const Rational& c) const;

  friend GenPoly operator+(const GenPoly& a, const GenPoly& b);
  friend GenPoly operator-(const GenPoly& a, const GenPoly& b);
  friend GenPoly operator*(const GenPoly& a, const GenPoly& b);
  GenPoly operator-() const { return scaled(Rational(-1)); }
  friend bool operator==(const GenPoly&, const GenPoly&) = default;

 private:
  std::vector<Term> t_;
};

/// Element of the field Q(w^(1/inf)) ordered with w infinite positive.
class HyperRational {
 public:
  HyperRational() : num_(), den_(GenPoly::constant(1)), int_cert_(true) {}
  HyperRational(const Rational& r);  // NOLINT: standard rationals embed implicitly
  HyperRational(long v) : HyperRational(Rational(v)) {}  // NOLINT
  HyperRational(int v) : HyperRational(Rational(v)) {}   // NOLINT

  static HyperRational omega() { return omega_pow(Rational(1)); }
  static HyperRational epsilon() { return omega_pow(Rational(-1)); }
  static HyperRational omega_pow(const Rational& e);
  /// Builds num/den and brings it to canonical form. DivisionByZero if den is 0.
  static HyperRational fraction(const GenPoly& num, const GenPoly& den);

  const GenPoly& num() const { return num_; }
  const GenPoly& den() const { return den_; }
  /// Certified member of *Z: an integer polynomial in w.
  bool integer_certified() const { return int_cert_; }

  int sign() const { return num_.is_zero() ? 0 : num_.leading().coef.sign(); }
  bool is_zero() const { return num_.is_zero(); }
  /// True when the value is a standard rational.
  bool is_standard() const { return num_.is_constant() && den_.is_constant(); }
  /// The rational value; InvalidArgument unless is_standard().
  Rational as_rational() const;

  HyperRational reciprocal() const;
  HyperRational abs() const { return sign() < 0 ? -*this : *this; }
  HyperRational pow(long k) const;

  friend HyperRational operator+(const HyperRational& a, const HyperRational& b);
  friend HyperRational operator-(const HyperRational& a, const HyperRational& b);
  friend HyperRational operator*(const HyperRational& a, const HyperRational& b);
  friend HyperRational operator/(const HyperRational& a, const HyperRational& b);
  HyperRational operator-() const;
  HyperRational& operator+=(const HyperRational& o) { return *this = *this + o; }
  HyperRational& operator-=(const HyperRational& o) { return *this = *this - o; }
  HyperRational& operator*=(const HyperRational& o) { return *this = *this * o; }
  HyperRational& operator/=(const HyperRational& o) { return *this = *this / o; }

  friend bool operator==(const HyperRational& a, const HyperRational& b);
  friend std::strong_ordering operator<=>(const HyperRational& a, const HyperRational& b);

  /// Canonical text, e.g. "(2*w^2 + w) / (w^2 + 1)".
  std::string to_string() const;

 private:
  static HyperRational normalize(const GenPoly& num, const GenPoly& den, bool reduce);
  HyperRational(GenPoly num, GenPoly den, bool cert)
      : num_(std::move(num)), den_(std::move(den)), int_cert_(cert) {}
  GenPoly num_, den_;
  bool int_cert_;
};

std::ostream& operator<<(std::ostream& os, const HyperRational& x);

/// Parses integers, p/q, w, eps, + - * /, parentheses and powers (w^(p/q), x^k).
HyperRational parse_hyper(std::string_view text);
std::string render_genpoly(const GenPoly& p);

enum class Magnitude { Infinitesimal, FiniteNonInfinitesimal, Infinite };
std::string_view magnitude_name(Magnitude m);

struct Classification {
  Magnitude kind;
  std::optional<Rational> st;  // absent for Infinite
};

Classification classify(const HyperRational& x);
/// Throws InfiniteNumber for infinite x.
Rational standard_part(const HyperRational& x);
bool infinitely_close(const HyperRational& x, const HyperRational& y);
bool same_galaxy(const HyperRational& x, const HyperRational& y);
/// A point separating the galaxies of x and y; SameGalaxy if x ~ y.
HyperRational between_galaxy(const HyperRational& x, const HyperRational& y);

enum class Tri { No, Yes, Unknown };
std::string_view tri_name(Tri t);

/// Interval with hyperrational endpoints; nullopt endpoints are -inf / +inf.
struct HInterval {
  std::optional<HyperRational> lo, hi;
  bool lo_open = false, hi_open = false;
  bool contains(const HyperRational& x) const;
};

namespace named {
struct MonZero {};
struct GalZero {};
struct StarNPlusInfinity {};
struct StarRPlus {};
struct InitialSegment { HyperRational bound; };
struct IntervalUnion { std::vector<HInterval> parts; };
}  // namespace named

using NamedSet = std::variant<named::MonZero, named::GalZero, named::StarNPlusInfinity,
                              named::StarRPlus, named::InitialSegment, named::IntervalUnion>;

/// Membership decided from certificates only; Unknown when no certificate applies.
Tri named_membership(const HyperRational& x, const NamedSet& set);

enum class SetKind { Standard, InternalNonstandard, External };
std::string_view set_kind_name(SetKind k);

struct SetClassification {
  SetKind kind;
  bool hyperfinite;
};

SetClassification set_classification(const NamedSet& set);

}  // namespace nsa
