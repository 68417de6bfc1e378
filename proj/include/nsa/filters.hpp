#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nsa/error.hpp"
#include "nsa/rational.hpp"

namespace nsa::filters {

// ---------------------------------------------------------------- finite grounds

/// Subsets of a finite ground set (at most 64 points) as bit masks.
using Subset = std::uint64_t;

struct GroundSet {
  std::vector<std::string> labels;

  static GroundSet of_size(std::size_t n);
  std::size_t size() const { return labels.size(); }
  Subset full() const { return labels.size() == 64 ? ~Subset{0} : ((Subset{1} << labels.size()) - 1); }
};

/// Real-valued function on a finite ground set, one value per point.
using GroundFunction = std::vector<Rational>;

struct Principal {
  Subset base;
  friend bool operator==(const Principal&, const Principal&) = default;
};
struct FrechetStub {
  friend bool operator==(const FrechetStub&, const FrechetStub&) = default;
};
using FilterDesc = std::variant<Principal, FrechetStub>;

/// Co-filter {I \ J : J in F}: subsets of I \ base, or the finite sets.
struct PrincipalCo {
  Subset base;
  friend bool operator==(const PrincipalCo&, const PrincipalCo&) = default;
};
struct FiniteSets {
  friend bool operator==(const FiniteSets&, const FiniteSets&) = default;
};
using CoFilterDesc = std::variant<PrincipalCo, FiniteSets>;

Subset zero_set(const GroundFunction& s);
/// Filter of zero sets of the ideal generated by gens. NotAnIdeal when the
/// generators have no common zero (the ideal is the whole ring).
FilterDesc filter_of_ideal_gens(const GroundSet& ground, std::span<const GroundFunction> gens);
/// s belongs to the ideal attached to F iff Z(s) is in F.
bool ideal_membership(const GroundFunction& s, const FilterDesc& f);
bool filter_contains(const FilterDesc& f, Subset s);
CoFilterDesc co_filter_of(const FilterDesc& f);
FilterDesc filter_of_co_filter(const CoFilterDesc& c);
bool co_filter_contains(const CoFilterDesc& c, Subset s, const GroundSet& ground);
bool is_ultrafilter(const FilterDesc& f, const GroundSet& ground);

/// Finite binary measure: one value (0 or 1) per subset mask.
struct BinMeasure {
  std::size_t ground_size = 0;
  std::vector<std::uint8_t> values;
  std::uint8_t operator()(Subset s) const { return values.at(s); }
};

/// NotAMeasure unless f is an ultrafilter on the ground.
BinMeasure measure_of(const FilterDesc& f, const GroundSet& ground);
/// NotAMeasure unless mu is binary, finitely additive and mu(I) = 1.
FilterDesc ultrafilter_of(const BinMeasure& mu);

// ---------------------------------------------------------------- eventually periodic sets

/// Subset of N given by residues mod k, corrected on finitely many points.
struct EPSet {
  std::uint64_t modulus = 1;
  std::vector<std::uint64_t> residues;  // sorted, < modulus
  std::vector<std::uint64_t> added;     // n with n mod k not in residues
  std::vector<std::uint64_t> removed;   // n with n mod k in residues

  static EPSet periodic(std::uint64_t modulus, std::vector<std::uint64_t> residues);
  static EPSet finite(std::vector<std::uint64_t> points);
  static EPSet all() { return periodic(1, {0}); }
  static EPSet none() { return periodic(1, {}); }

  bool pattern_contains(std::uint64_t n) const;
  bool contains(std::uint64_t n) const;
  bool is_finite() const { return residues.empty(); }
  bool is_cofinite() const { return residues.size() == modulus; }

  EPSet complement() const;
  /// Same set with the smallest period and normalised exceptions.
  EPSet reduced() const;

  friend EPSet operator|(const EPSet& a, const EPSet& b);
  friend EPSet operator&(const EPSet& a, const EPSet& b);
  friend bool operator==(const EPSet&, const EPSet&) = default;
};

/// Validates the invariants of an EPSet; InvalidArgument on violation.
void validate(const EPSet& s);

enum class Policy { ExplicitOnly, AutoLeastResidue };

struct Decision {
  enum class Kind { Yes, No, NeedCommitment } kind;
  std::uint64_t modulus = 0;  // the blocking modulus for NeedCommitment
  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Lazily constructed free ultrafilter on N, fixed only on residue classes.
class UltrafilterOracle {
 public:
  explicit UltrafilterOracle(Policy policy = Policy::ExplicitOnly) : policy_(policy) {}

  /// IncoherentCommitment if r conflicts with an existing commitment.
  void commit(std::uint64_t modulus, std::uint64_t residue);
  /// Residues mod k compatible with every commitment.
  std::vector<std::uint64_t> candidates(std::uint64_t modulus) const;
  /// The residue mod k if already forced.
  std::optional<std::uint64_t> residue(std::uint64_t modulus) const;

  Decision decide(const EPSet& s);
  /// decide() that throws NeedCommitment instead of returning it.
  bool contains(const EPSet& s);

  Policy policy() const { return policy_; }
  void set_policy(Policy p) { policy_ = p; }
  const std::map<std::uint64_t, std::uint64_t>& commitments() const { return commitments_; }

 private:
  std::map<std::uint64_t, std::uint64_t> commitments_;
  Policy policy_;
};

/// Free ultrafilter decisions ignore the finite corrections: Frechet is
/// contained in every free ultrafilter.
bool frechet_contains(const EPSet& s);

enum class MeasureValue { Zero, One, Undecided };
MeasureValue measure_value(UltrafilterOracle& oracle, const EPSet& s);

/// Exactly one of S and its complement is in U (commits under the auto policy).
bool dichotomy_check(UltrafilterOracle& oracle, const EPSet& s);

}  // namespace nsa::filters
