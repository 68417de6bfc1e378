#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsa/error.hpp"
#include "nsa/hyperrational.hpp"
#include "nsa/ultrapower_seq.hpp"

namespace nsa::calc {

using seq::IntervalUnion;
using seq::RatFunc;
using seq::RInterval;
using seq::SequenceReal;

/// f(x) for a hyperrational argument.
HyperRational eval_at(const RatFunc& f, const HyperRational& x);
HyperRational eval_at(const Poly& p, const HyperRational& x);

/// The two infinite sample points of the tail checks.
HyperRational tail_point();         // w
HyperRational second_tail_point();  // w^2

// ---------------------------------------------------------------- sequences

/// Limit through the monad: every class piece at w is finite with one common standard part.
std::optional<Rational> limit_via_monad(const SequenceReal& x);
bool is_cauchy(const SequenceReal& x);
bool is_bounded(const SequenceReal& x);

struct LimitPoints {
  std::vector<Rational> points;                // ascending, distinct
  std::vector<std::uint64_t> unbounded_classes;  // classes whose tail leaves Gal(0)
};
LimitPoints limit_points(const SequenceReal& x);

// ---------------------------------------------------------------- topology of interval unions

/// Finite union of intervals; normalize() sorts, drops empties and merges touching parts.
using SetDesc = IntervalUnion;
SetDesc normalize(const SetDesc& a);
/// *A for a standard interval union, as hyperrational intervals.
std::vector<HInterval> star_set(const SetDesc& a);
bool star_contains(const SetDesc& a, const HyperRational& x);

struct TopoWitness {
  std::string criterion;  // "open", "closed" or "compact"
  Rational point;         // the standard point involved (0 for unbounded sides)
  HyperRational witness;
  std::string reason;
};

struct TopoResult {
  bool open = true, closed = true, compact = true;
  std::vector<TopoWitness> trace;
};

/// Each failed criterion carries a nonstandard witness that was checked against *A.
TopoResult topo_check(const SetDesc& a);

// ---------------------------------------------------------------- hyperfinite sums and products

struct PolySum {
  Poly term;  // a(i) = term(i)
};
/// a(i) = g(i) - g(i+1), verified symbolically.
struct TelescopingSum {
  RatFunc term, g;
};
using ClosedFormSum = std::variant<PolySum, TelescopingSum>;

/// sum_{i=lower}^{upper} a(i) in closed form. upper must be a certified integer >= lower - 1.
HyperRational hyperfinite_sum(const ClosedFormSum& a, const HyperRational& upper, long lower = 1);
/// The same sum added term by term, for standard bounds.
Rational direct_sum(const ClosedFormSum& a, long upper, long lower = 1);

/// a(i) = g(i+1)/g(i) with g free of zeros and poles on the range.
struct TelescopingProduct {
  RatFunc term, g;
};
HyperRational hyperfinite_product(const TelescopingProduct& a, const HyperRational& upper, long lower = 1);
Rational direct_product(const TelescopingProduct& a, long upper, long lower = 1);

// ---------------------------------------------------------------- permanence

enum class PermanenceMode { Overflow, Underflow, LocalOverflow };
std::string_view permanence_mode_name(PermanenceMode m);

struct PermanenceResult {
  std::optional<HyperRational> witness;  // nullopt means undetermined
  std::string note;
};

/// A is a finite union of intervals with hyperrational endpoints. PreconditionFailed when the
/// covering condition of the mode is refuted. Overflow witnesses are certified infinite
/// integers of A; `extra` adds caller-supplied candidates.
PermanenceResult overflow_witness(const std::vector<HInterval>& a, PermanenceMode mode,
                                  const std::vector<HyperRational>& extra = {});

/// Sequence whose class pieces are polynomials in n with hyperrational coefficients.
struct HyperSequence {
  std::uint64_t modulus = 1;
  std::vector<std::vector<HyperRational>> pieces;  // coefficient of n^j at index j
};
HyperRational eval_piece(const std::vector<HyperRational>& piece, const HyperRational& n);

/// Infinite nu = w^t with s_n infinitesimal for n <= nu; NotPointwiseInfinitesimal when some
/// s_n with standard n is not infinitesimal.
HyperRational robinson_witness(const HyperSequence& s);

}  // namespace nsa::calc
