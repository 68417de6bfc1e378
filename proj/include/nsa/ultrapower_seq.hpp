#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsa/filters.hpp"
#include "nsa/hyperrational.hpp"
#include "nsa/mpoly.hpp"
#include "nsa/poly.hpp"

namespace nsa::seq {

using filters::EPSet;
using filters::UltrafilterOracle;

/// Rational function in n, reduced, with monic denominator.
class RatFunc {
 public:
  RatFunc() : num_(), den_(1) {}
  RatFunc(const Rational& c) : num_(c), den_(1) {}  // NOLINT
  RatFunc(const Poly& p) : num_(p), den_(1) {}      // NOLINT
  RatFunc(int c) : RatFunc(Rational(c)) {}          // NOLINT
  RatFunc(const Poly& num, const Poly& den);
  static RatFunc n() { return RatFunc(Poly::x()); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  /// DivisionByZero at a pole.
  Rational eval(const Rational& x) const;
  bool has_pole_at(const Rational& x) const { return den_.eval(x).is_zero(); }
  /// Sign of f(n) for all sufficiently large n.
  int eventual_sign() const { return num_.is_zero() ? 0 : num_.lc().sign(); }
  /// Every real zero or pole lies strictly below this bound.
  Rational root_bound() const;

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const { return RatFunc(-num_, den_); }
  friend bool operator==(const RatFunc&, const RatFunc&) = default;

  std::string to_string() const;

 private:
  Poly num_, den_;
};

/// Real sequence: one rational function per residue class plus finitely many
/// explicit values.
struct SequenceReal {
  std::uint64_t modulus = 1;
  std::vector<RatFunc> pieces;
  std::map<std::uint64_t, Rational> exceptions;

  static SequenceReal constant(const Rational& c);
  static SequenceReal of(const RatFunc& f);
  /// Residue-periodic sequence with the given values (value[r] on class r).
  static SequenceReal periodic(const std::vector<Rational>& values);

  const RatFunc& piece(std::uint64_t n) const { return pieces.at(n % modulus); }
  /// s_n; DivisionByZero at an uncovered pole.
  Rational at(std::uint64_t n) const;
  /// Same sequence expressed with modulus L (a multiple of the current one).
  SequenceReal lifted(std::uint64_t L) const;
  std::string to_string() const;
};

/// InvalidArgument when a piece has a pole at an index of its class not covered by an exception.
void validate(const SequenceReal& s);

SequenceReal embed_rational(const Rational& r);

SequenceReal add(const SequenceReal& s, const SequenceReal& t);
SequenceReal sub(const SequenceReal& s, const SequenceReal& t);
SequenceReal mul(const SequenceReal& s, const SequenceReal& t);
/// DivisionByZeroClass if t = 0 modulo the oracle; may raise NeedCommitment.
SequenceReal div(const SequenceReal& s, const SequenceReal& t, UltrafilterOracle& oracle);

enum class Order { Less, Equal, Greater };
std::string_view order_name(Order o);

/// Compares modulo the oracle; raises NeedCommitment with the blocking modulus.
Order seq_compare(const SequenceReal& s, const SequenceReal& t, UltrafilterOracle& oracle);
/// EPSet of indices where s_n < t_n (resp. ==, >), exact up to the horizon.
EPSet compare_set(const SequenceReal& s, const SequenceReal& t, Order which, std::uint64_t horizon = 10000);

// ---------------------------------------------------------------- relations

enum class Cmp { Lt, Le, Eq, Ne, Ge, Gt };

/// Quantifier-free boolean combination of polynomial sign conditions.
class RelationDesc {
 public:
  enum class Op { Atom, And, Or, Not };
  struct Node {
    Op op = Op::Atom;
    MPoly poly;
    Cmp cmp = Cmp::Eq;
    std::vector<Node> kids;
  };

  RelationDesc(std::size_t arity, Node root);
  static RelationDesc atom(const MPoly& p, Cmp c);
  static RelationDesc leq();  // x0 <= x1
  static RelationDesc lt();   // x0 < x1

  std::size_t arity() const { return arity_; }
  const Node& root() const { return root_; }
  bool holds(std::span<const Rational> xs) const;

  RelationDesc operator&&(const RelationDesc& o) const;
  RelationDesc operator||(const RelationDesc& o) const;
  RelationDesc operator!() const;

 private:
  std::size_t arity_;
  Node root_;
};

/// Interval of R with rational endpoints (nullopt = unbounded side).
struct RInterval {
  std::optional<Rational> lo, hi;
  bool lo_open = false, hi_open = false;

  static RInterval closed(const Rational& a, const Rational& b) { return {a, b, false, false}; }
  static RInterval open(const Rational& a, const Rational& b) { return {a, b, true, true}; }
  static RInterval point(const Rational& a) { return {a, a, false, false}; }
  bool contains(const Rational& x) const;
  bool empty() const;
};
using IntervalUnion = std::vector<RInterval>;

bool contains(const IntervalUnion& a, const Rational& x);
/// Unary relation "x0 in A".
RelationDesc membership_relation(const IntervalUnion& a);

bool transfer_relation_holds(const RelationDesc& p, std::span<const SequenceReal> args, UltrafilterOracle& oracle);
bool star_set_membership(const IntervalUnion& a, const SequenceReal& s, UltrafilterOracle& oracle);
/// Union and intersection transfer laws for s against A_1..A_m.
bool star_set_algebra_check(std::span<const IntervalUnion> sets, const SequenceReal& s, UltrafilterOracle& oracle);
/// Compares *chi_P evaluated on concrete terms with transfer_relation_holds.
bool char_func_transfer_check(const RelationDesc& p, std::span<const SequenceReal> args, UltrafilterOracle& oracle);

// ---------------------------------------------------------------- internal sets

struct InternalInterval {
  std::optional<RatFunc> lo, hi;
  bool lo_open = false, hi_open = false;
};

/// Internal set [A_i]: one interval per residue class of i, plus explicit A_i
/// at finitely many indices.
struct InternalSetDesc {
  std::uint64_t modulus = 1;
  std::vector<InternalInterval> classes;
  std::map<std::uint64_t, RInterval> exceptions;

  static InternalSetDesc uniform(const InternalInterval& iv);
  /// A_i as a concrete interval (empty at a pole of an endpoint).
  RInterval at(std::uint64_t i) const;
};

bool internal_membership(const InternalSetDesc& a, const SequenceReal& s, UltrafilterOracle& oracle);
/// A_i nonempty for almost all i.
bool nonvoid_ae(const InternalSetDesc& a, UltrafilterOracle& oracle);
/// B_i subset of A_i for almost all i.
bool subset_ae(const InternalSetDesc& b, const InternalSetDesc& a, UltrafilterOracle& oracle);

/// Rational function of (level n, index i) as num/den in MPoly variables x0 = n, x1 = i.
struct BiRatFunc {
  MPoly num{2}, den = MPoly::constant(2, 1);
  RatFunc at_level(const Rational& n) const;
  RatFunc diagonal() const;
};

struct ChainRule {
  std::optional<BiRatFunc> lo, hi;
  bool lo_open = false, hi_open = false;
};

/// A_0 ⊇ A_1 ⊇ ... : explicit first levels, then the rule for every later level.
struct Chain {
  std::vector<InternalSetDesc> levels;
  std::optional<ChainRule> rule;

  InternalSetDesc level(std::uint64_t n) const;
};

/// Point of an interval: midpoint, lo+1 / hi-1 when one side is unbounded, 0 for R.
Rational choose_point(const RInterval& iv);

/// Countable saturation witness; checks levels 0..depth (EmptyChainLevel, NotDecreasing).
SequenceReal saturation_witness(const Chain& chain, UltrafilterOracle& oracle, std::uint64_t depth);

/// HyperRational with integer exponents as the sequence n -> x(n).
SequenceReal embed_integer_exponent(const HyperRational& x);
/// Tier agreement of x against the sample rationals and against y.
bool cross_tier_check(const HyperRational& x, std::span<const Rational> samples, const HyperRational& y,
                      UltrafilterOracle& oracle);

}  // namespace nsa::seq
