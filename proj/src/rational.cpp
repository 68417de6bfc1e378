#include "nsa/rational.hpp"

#include <cctype>
#include <ostream>

#include "nsa/error.hpp"

namespace nsa {

std::string_view error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::InfiniteNumber: return "InfiniteNumber";
    case ErrorKind::SameGalaxy: return "SameGalaxy";
    case ErrorKind::NeedCommitment: return "NeedCommitment";
    case ErrorKind::IncoherentCommitment: return "IncoherentCommitment";
    case ErrorKind::NotAnIdeal: return "NotAnIdeal";
    case ErrorKind::NotAMeasure: return "NotAMeasure";
    case ErrorKind::DivisionByZeroClass: return "DivisionByZeroClass";
    case ErrorKind::EmptyChainLevel: return "EmptyChainLevel";
    case ErrorKind::NotDecreasing: return "NotDecreasing";
    case ErrorKind::NonIntegralExponent: return "NonIntegralExponent";
    case ErrorKind::InfiniteQuantifierRange: return "InfiniteQuantifierRange";
    case ErrorKind::WitnessNotTotal: return "WitnessNotTotal";
    case ErrorKind::CounterexampleFound: return "CounterexampleFound";
    case ErrorKind::SizeExplosion: return "SizeExplosion";
    case ErrorKind::NotInUniverse: return "NotInUniverse";
    case ErrorKind::NotASentence: return "NotASentence";
    case ErrorKind::RankHeterogeneousFamily: return "RankHeterogeneousFamily";
    case ErrorKind::AxiomViolation: return "AxiomViolation";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NotCertifiedInteger: return "NotCertifiedInteger";
    case ErrorKind::UnsupportedTermClass: return "UnsupportedTermClass";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotPointwiseInfinitesimal: return "NotPointwiseInfinitesimal";
    case ErrorKind::UnsupportedFunctionClass: return "UnsupportedFunctionClass";
    case ErrorKind::InfiniteIntegral: return "InfiniteIntegral";
    case ErrorKind::NotMonotone: return "NotMonotone";
  }
  return "Error";
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) fail(ErrorKind::DivisionByZero, "zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

namespace {

bool parse_integer(std::string_view s, Integer& out) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  std::string digits(s.substr(s[0] == '+' ? 1 : 0));
  return out.set_str(digits, 10) == 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  Integer n, d(1);
  if (slash == std::string_view::npos) {
    if (!parse_integer(text, n)) fail(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
  } else {
    if (!parse_integer(trim(text.substr(0, slash)), n) || !parse_integer(trim(text.substr(slash + 1)), d))
      fail(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
    if (d == 0) fail(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
  }
  return Rational(n, d);
}

Integer Rational::floor() const {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

Integer Rational::ceil() const {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return q;
}

Rational Rational::inverse() const {
  if (is_zero()) fail(ErrorKind::DivisionByZero);
  return Rational(mpq_class(1 / v_));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorKind::DivisionByZero);
  v_ /= o.v_;
  return *this;
}

std::string Rational::to_string() const { return v_.get_str(10); }

std::size_t Rational::hash() const {
  std::size_t h = mpz_get_ui(v_.get_num_mpz_t());
  h ^= mpz_get_ui(v_.get_den_mpz_t()) * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(sgn(v_) + 1);
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(n, d);
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace nsa
