#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nsa/error.hpp"
#include "nsa/rational.hpp"

namespace nsa {

/// Sparse multivariate polynomial over Q in variables x0..x{n-1}.
class MPoly {
 public:
  using Exponents = std::vector<std::uint32_t>;

  explicit MPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  static MPoly constant(std::size_t nvars, const Rational& c) {
    MPoly p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }
  static MPoly variable(std::size_t nvars, std::size_t i) {
    MPoly p(nvars);
    Exponents e(nvars, 0);
    e.at(i) = 1;
    p.add_term(e, 1);
    return p;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (e.size() != nvars_) fail(ErrorKind::ArityError, "exponent vector length");
    Rational& slot = terms_[e];
    slot += c;
    if (slot.is_zero()) terms_.erase(e);
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  MPoly operator+(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  MPoly operator-(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
  }
  MPoly operator*(const MPoly& o) const {
    MPoly r(nvars_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) {
        Exponents e(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }

  /// Evaluate in any commutative ring T constructible from Rational.
  template <class T>
  T eval(std::span<const T> xs) const {
    if (xs.size() != nvars_) fail(ErrorKind::ArityError, "wrong number of arguments");
    T acc{Rational(0)};
    for (const auto& [e, c] : terms_) {
      T term{c};
      for (std::size_t i = 0; i < nvars_; ++i)
        for (std::uint32_t k = 0; k < e[i]; ++k) term = term * xs[i];
      acc = acc + term;
    }
    return acc;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += c.to_string();
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) out += "*x" + std::to_string(i) + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    }
    return out;
  }

 private:
  std::size_t nvars_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace nsa
