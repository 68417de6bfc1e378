#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nsa/error.hpp"
#include "nsa/filters.hpp"
#include "nsa/hyperrational.hpp"

namespace nsa::super {

/// Atom or finite set, hash-consed so that equal entities share one handle.
/// Equality of handles is extensional equality of sets.
class HEntity {
 public:
  HEntity() = default;  // the empty set
  static HEntity atom(std::string_view label);
  static HEntity set(std::vector<HEntity> members);
  static HEntity empty() { return HEntity(); }

  bool is_atom() const;
  bool is_set() const { return !is_atom(); }
  /// Label of an atom; InvalidArgument for sets.
  const std::string& label() const;
  /// Sorted members; empty for atoms (atoms have no members).
  const std::vector<HEntity>& members() const;
  bool contains(HEntity x) const;
  std::size_t size() const { return members().size(); }
  /// 0 for atoms, 1 + max member rank for sets (the empty set has rank 1).
  std::size_t rank() const;
  std::string to_string() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(HEntity a, HEntity b) { return a.id_ == b.id_; }
  friend auto operator<=>(HEntity a, HEntity b) { return a.id_ <=> b.id_; }

 private:
  explicit HEntity(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
  friend class Pool;
};

struct HEntityHash {
  std::size_t operator()(HEntity e) const { return std::hash<std::uint32_t>()(e.id()); }
};

std::ostream& operator<<(std::ostream& os, HEntity e);

// ---------------------------------------------------------------- set calculus

HEntity set_union(HEntity a, HEntity b);
HEntity set_intersection(HEntity a, HEntity b);
HEntity set_difference(HEntity a, HEntity b);
bool is_subset(HEntity a, HEntity b);
HEntity power_set(HEntity a);  // SizeExplosion above 2^16 members
/// Union of the members of a.
HEntity big_union(HEntity a);

/// <x,y> = {x, {x,y}}.
HEntity pair(HEntity x, HEntity y);
/// Inverse of pair(); nullopt for entities that are not pairs.
std::optional<std::pair<HEntity, HEntity>> unpair(HEntity p);
/// <x1,...,xm>: the pair for m = 2, otherwise {<#1,x1>, ..., <#m,xm>} with reserved index atoms "#k".
HEntity tuple(std::span<const HEntity> xs);
HEntity cartesian(HEntity a, HEntity b);
HEntity domain(HEntity p);
HEntity range(HEntity p);
/// P[B]: second components of pairs of P whose first component lies in B.
HEntity image(HEntity p, HEntity b);
/// P^-1[B]: first components of pairs of P whose second component lies in B.
HEntity preimage(HEntity p, HEntity b);
/// Functional relation P with domain a and range inside b.
bool is_function(HEntity p, HEntity a, HEntity b);
std::optional<HEntity> apply(HEntity f, HEntity x);

// ---------------------------------------------------------------- universe

/// Levels V_0 .. V_N over a finite atom set.
class SuperUniverse {
 public:
  /// Atoms are labelled a, b, c, ...; depth_cap <= 3. SizeExplosion when |V_n| would exceed size_cap.
  static SuperUniverse build(std::size_t atom_count, std::size_t depth_cap, std::size_t size_cap = 1u << 20);
  static SuperUniverse build(const std::vector<std::string>& atom_labels, std::size_t depth_cap,
                             std::size_t size_cap = 1u << 20);

  std::size_t depth() const { return levels_.size() - 1; }
  const std::vector<HEntity>& atoms() const { return levels_[0]; }
  /// V_n as a list (includes V_{n-1}).
  const std::vector<HEntity>& level(std::size_t n) const { return levels_.at(n); }
  /// V_n as an entity (needs rank n+1 <= what the caller can use).
  HEntity level_entity(std::size_t n) const { return HEntity::set(levels_.at(n)); }
  bool contains(HEntity e) const { return all_.count(e) > 0; }
  /// Least n with e in V_n; NotInUniverse outside V_N.
  std::size_t rank(HEntity e) const;
  /// True when every atom hereditarily in e is one of the base atoms.
  bool over_base(HEntity e) const;

 private:
  std::vector<std::vector<HEntity>> levels_;
  std::unordered_set<HEntity, HEntityHash> all_;
  std::unordered_set<HEntity, HEntityHash> base_;
};

// ---------------------------------------------------------------- the language L_X

struct LTerm {
  enum class Kind { Const, Var, Tuple };
  Kind kind = Kind::Const;
  HEntity value;
  std::string var;
  std::vector<LTerm> items;

  static LTerm constant(HEntity e) { return {Kind::Const, e, {}, {}}; }
  static LTerm variable(std::string v) { return {Kind::Var, {}, std::move(v), {}}; }
  static LTerm tuple(std::vector<LTerm> xs) { return {Kind::Tuple, {}, {}, std::move(xs)}; }
  friend bool operator==(const LTerm&, const LTerm&) = default;
};

class LFormula {
 public:
  enum class Kind { In, Eq, Not, And, Or, Implies, Iff, ForallIn, ExistsIn };

  static LFormula in(LTerm a, LTerm b);
  static LFormula eq(LTerm a, LTerm b);
  static LFormula negation(LFormula f);
  static LFormula binary(Kind k, LFormula a, LFormula b);
  static LFormula forall_in(std::string var, LTerm bound, LFormula body);
  static LFormula exists_in(std::string var, LTerm bound, LFormula body);

  Kind kind() const { return n_->kind; }
  const LTerm& lhs() const { return n_->lhs; }    // atoms
  const LTerm& rhs() const { return n_->rhs; }    // atoms
  const LTerm& bound() const { return n_->rhs; }  // quantifiers
  const std::string& var() const { return n_->var; }
  const LFormula& a() const { return n_->kids[0]; }
  const LFormula& b() const { return n_->kids[1]; }

  friend LFormula operator!(LFormula f) { return negation(std::move(f)); }
  friend LFormula operator&&(LFormula a, LFormula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  friend LFormula operator||(LFormula a, LFormula b) { return binary(Kind::Or, std::move(a), std::move(b)); }

 private:
  struct Node {
    Kind kind;
    LTerm lhs, rhs;
    std::string var;
    std::vector<LFormula> kids;
  };
  explicit LFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Text form: (forall x in t) / (exists x in t) or the symbols, ~ & | -> <->, atoms t in t, t = t,
/// terms are names, tuples <t,...> and set literals {t,...} of constants. Names found in
/// `constants` are constants; all others are variables.
LFormula parse_formula(std::string_view text, const std::map<std::string, HEntity>& constants);
std::string render(const LFormula& f);

std::set<std::string> free_vars(const LFormula& f);
bool is_sentence(const LFormula& f);
/// Connective and quantifier nesting depth; atoms have depth 0.
std::size_t depth(const LFormula& f);
/// InvalidArgument when a quantifier rebinds a variable inside its own scope.
void check_bounded_form(const LFormula& f);
/// Renames every bound variable v to v + suffix.
LFormula rename_bound(const LFormula& f, const std::string& suffix);
/// Replaces every constant c by star(c).
LFormula star_transform(const LFormula& f, const std::function<HEntity(HEntity)>& star);

using Assignment = std::map<std::string, HEntity>;
/// Truth of f under an assignment of its free variables (NotASentence if one is missing).
bool eval_with(const LFormula& f, const Assignment& env);
/// Truth of a sentence; NotASentence for free variables, NotInUniverse for foreign constants.
bool eval_formula(const LFormula& f, const SuperUniverse& u);

// ---------------------------------------------------------------- bounded ultrapower

using Family = std::vector<HEntity>;

/// Rank-homogeneous families I -> V_{N+1}(X) modulo an ultrafilter on a finite I,
/// with the embedding e and the Mostowski collapse M computed by recursion on rank.
class BoundedUltrapower {
 public:
  BoundedUltrapower(const SuperUniverse& u, std::size_t index_size, filters::FilterDesc uf);

  std::size_t index_size() const { return m_; }
  const filters::FilterDesc& ultrafilter() const { return uf_; }
  bool large(filters::Subset s) const { return filters::filter_contains(uf_, s); }

  /// Common rank of the values; RankHeterogeneousFamily otherwise.
  std::size_t family_rank(const Family& a) const;
  bool equivalent(const Family& a, const Family& b) const;
  /// [b] in_U [a]
  bool member(const Family& b, const Family& a) const;
  Family e(HEntity a) const { return Family(m_, a); }
  HEntity mostowski(const Family& a) const;
  HEntity star(HEntity a) const { return mostowski(e(a)); }
  /// All families whose values have the given rank (rank <= N).
  const std::vector<Family>& families_of_rank(std::size_t r) const;

 private:
  const SuperUniverse* u_;
  std::size_t m_;
  filters::FilterDesc uf_;
  mutable std::map<Family, HEntity> memo_;
  mutable std::map<std::size_t, std::vector<Family>> by_rank_;
};

/// LHS: starred f at the collapsed arguments; RHS: the index set where f holds coordinatewise
/// is U-large. Returns whether the two verdicts agree.
bool los_check(const LFormula& f, const std::vector<std::pair<std::string, Family>>& args, const BoundedUltrapower& bu);

/// Formulas over variables {x, y} and the given constants, depth <= max_depth (<= 2);
/// depth-2 formulas are a deterministic sample of at most depth2_sample.
std::vector<LFormula> enumerate_formulas(const std::vector<HEntity>& constants, std::size_t max_depth,
                                         std::size_t depth2_sample);

struct SuiteReport {
  struct Check {
    std::string name;
    std::size_t cases = 0, failed = 0;
    std::string first_failure;
  };
  std::vector<Check> checks;
  std::size_t cases() const;
  std::size_t failed() const;
};

struct LosConfig {
  std::size_t atoms = 2, depth = 2;
  std::vector<std::size_t> index_sizes{2, 3};
  std::size_t depth2_sample = 3000;
  std::size_t families_per_var = 9;
};
/// One check per (|I|, principal ultrafilter).
SuiteReport los_exhaustive(const LosConfig& cfg);

struct MonoConfig {
  std::size_t atoms = 2, depth = 2, index_size = 2;
  std::size_t principal_at = 0;
  bool strict = true;  // AxiomViolation on the first failure
};
/// The five monomorphism axioms, the twelve theorem clauses and star = identity.
SuiteReport monomorphism_suite(const MonoConfig& cfg);

// ---------------------------------------------------------------- internal entities at finite scale

enum class EntityKind { Standard, InternalNotStandard, External };
std::string_view entity_kind_name(EntityKind k);

/// Standard if b = *a for some a in the universe, internal if b is a member of some *a.
EntityKind classify_entity(HEntity b, const BoundedUltrapower& bu, const SuperUniverse& u);
/// {x in A | f(x)} for f with the single free variable `var`.
HEntity internal_definition(HEntity a, const std::string& var, const LFormula& f);
/// Union, intersection and difference of internal sets are internal.
bool internal_closure_check(HEntity a, HEntity b, const BoundedUltrapower& bu, const SuperUniverse& u);
/// Least member of a finite set of certified hyperintegers; EmptySet when K is empty,
/// NotCertifiedInteger for other members.
HyperRational least_element(std::span<const HyperRational> k);
/// Every finite subset of A has a common P-successor.
bool is_concurrent(HEntity p, HEntity a);
/// Every finite subset of A lies inside some member of S.
bool is_exhausting(HEntity s, HEntity a);
/// Some g with f(a) = g(*a) on A, namely *f.
bool comprehension_check(HEntity a, HEntity b, HEntity f, const BoundedUltrapower& bu);
/// B is a finite subset of some level.
bool hyperfinite_check(HEntity b, const SuperUniverse& u);

}  // namespace nsa::super
