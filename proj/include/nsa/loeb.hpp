#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nsa/error.hpp"
#include "nsa/hyperrational.hpp"
#include "nsa/poly.hpp"
#include "nsa/ultrapower_seq.hpp"

namespace nsa::loeb {

using seq::IntervalUnion;
using seq::RInterval;

/// Piecewise polynomial on [0,1]. Piece j lives on the open cell (b_j, b_{j+1});
/// the value at each breakpoint is stored separately, so indicators of closed
/// and open intervals are both exact. Kept in canonical form: no breakpoint is
/// redundant, so structural equality is equality of functions.
class SymFunc {
 public:
  SymFunc() : SymFunc(Poly()) {}
  SymFunc(const Poly& p);  // NOLINT
  SymFunc(const Rational& c) : SymFunc(Poly(c)) {}  // NOLINT
  SymFunc(int c) : SymFunc(Poly(c)) {}              // NOLINT
  /// breaks = 0 < b_1 < ... < 1, values.size() == breaks.size(), pieces one fewer.
  SymFunc(std::vector<Rational> breaks, std::vector<Poly> pieces, std::vector<Rational> values);
  /// Values at the breakpoints taken from the piece on the right (last one from the left).
  static SymFunc piecewise(std::vector<Rational> breaks, std::vector<Poly> pieces);
  static SymFunc x() { return SymFunc(Poly::x()); }
  /// InvalidArgument unless A lies inside [0,1].
  static SymFunc indicator(const IntervalUnion& a);

  const std::vector<Rational>& breaks() const { return breaks_; }
  const std::vector<Poly>& pieces() const { return pieces_; }
  const std::vector<Rational>& values() const { return values_; }
  /// InvalidArgument outside [0,1].
  Rational eval(const Rational& x) const;
  /// Same function on a finer breakpoint list (must contain the current one).
  SymFunc refined(const std::vector<Rational>& breaks) const;
  int degree() const;
  bool is_zero() const { return pieces_.size() == 1 && pieces_[0].is_zero() && values_[0].is_zero() && values_[1].is_zero(); }
  /// Exact: every piece >= 0 on its closed cell and every stored value >= 0.
  bool nonnegative() const;

  friend SymFunc operator+(const SymFunc& a, const SymFunc& b);
  friend SymFunc operator-(const SymFunc& a, const SymFunc& b);
  friend SymFunc operator*(const SymFunc& a, const SymFunc& b);
  SymFunc operator-() const;
  friend bool operator==(const SymFunc&, const SymFunc&) = default;

  std::string to_string() const;

 private:
  void canonicalize();
  std::vector<Rational> breaks_;
  std::vector<Poly> pieces_;
  std::vector<Rational> values_;
};

/// Breakpoints of both functions, merged.
std::vector<Rational> common_breaks(const SymFunc& a, const SymFunc& b);

/// Lattice operations. UnsupportedFunctionClass when f - g changes sign at an
/// irrational point inside a cell.
SymFunc max(const SymFunc& f, const SymFunc& g);
SymFunc min(const SymFunc& f, const SymFunc& g);
SymFunc abs(const SymFunc& f);
SymFunc pos_part(const SymFunc& f);  // f v 0
SymFunc neg_part(const SymFunc& f);  // (-f) v 0

/// Finite sum of hyperrational multiples of standard functions.
struct HyperFunc {
  std::vector<std::pair<HyperRational, SymFunc>> terms;

  HyperFunc() = default;
  HyperFunc(const SymFunc& f) : terms{{HyperRational(1), f}} {}  // NOLINT
  HyperFunc(const HyperRational& s, const SymFunc& f) : terms{{s, f}} {}

  friend HyperFunc operator+(const HyperFunc& a, const HyperFunc& b);
  friend HyperFunc operator*(const SymFunc& h, const HyperFunc& g);
};

/// Uniform grid { l/N : 0 <= l < N } with weight 1/N.
struct Grid {
  HyperRational size;

  /// lcm of the breakpoint denominators times w^power.
  static Grid for_function(const SymFunc& f, long power = 1);
  static Grid for_function(const HyperFunc& f, long power = 1);
};

/// I f = (1/N) sum_{l<N} f(l/N), exact. N must be a positive certified integer
/// and every breakpoint a grid point, else UnsupportedFunctionClass.
HyperRational internal_integral(const Grid& g, const SymFunc& f);
HyperRational internal_integral(const Grid& g, const HyperFunc& f);
/// The same with right endpoints l = 1..N.
HyperRational internal_integral_right(const Grid& g, const SymFunc& f);
/// Term-by-term sum for a standard grid, as a cross-check.
Rational direct_grid_sum(const SymFunc& f, long n);

/// I# f = st(I f) on an infinite grid for f (the grid drops out).
Rational standardize(const SymFunc& f);
/// InfiniteIntegral when I f is not finite.
Rational standardize(const HyperFunc& f, const Grid& g);
Rational standardize(const HyperFunc& f);

/// st(I|g|) = 0. UnsupportedFunctionClass when infinite terms cancel at top
/// order except on finitely many points.
bool is_null(const HyperFunc& g);

/// A standard bound for |f| on [0,1] (sum of absolute coefficients).
Rational sup_bound(const SymFunc& f);

struct SandwichResult {
  SymFunc alpha, beta;
  Rational alpha_bound;   // |alpha| <= alpha_bound, so I|alpha| is finite
  Rational lower, upper;  // st(I alpha) and st(I alpha) + eps
  Rational value;         // I# f
  bool verdict = false;
};
SandwichResult sandwich_check(const SymFunc& f, const Rational& eps);

struct MctReport {
  std::vector<Rational> values;  // I# f_1 .. I# f_depth
  Rational limit_value;          // I# f
  Rational gap;                  // I# f - I# f_depth
  bool increasing = false, bounded = false, within_tail = false;
  bool ok() const { return increasing && bounded && within_tail; }
};
/// NotMonotone unless f_1 <= f_2 <= ... <= f_depth <= f pointwise (exact).
MctReport monotone_convergence_check(const std::function<SymFunc(unsigned)>& seq, const SymFunc& f, unsigned depth,
                                     const Rational& tail_bound);
/// f_n(x) = sum_{j=1}^{n} x^j / 2^j.
SymFunc geometric_partial(unsigned n);
/// Geometric demo at the given depth: limit truncated at 64 terms, tail bound 2^-depth.
MctReport geometric_demo(unsigned depth);

/// I#(chi_A) for A inside [0,1].
Rational loeb_measure(const IntervalUnion& a);

}  // namespace nsa::loeb
