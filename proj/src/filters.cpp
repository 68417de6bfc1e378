#include "nsa/filters.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace nsa::filters {

GroundSet GroundSet::of_size(std::size_t n) {
  if (n > 64) fail(ErrorKind::InvalidArgument, "ground sets hold at most 64 points");
  GroundSet g;
  for (std::size_t i = 0; i < n; ++i) g.labels.push_back("i" + std::to_string(i));
  return g;
}

Subset zero_set(const GroundFunction& s) {
  Subset z = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i].is_zero()) z |= Subset{1} << i;
  return z;
}

FilterDesc filter_of_ideal_gens(const GroundSet& ground, std::span<const GroundFunction> gens) {
  Subset z = ground.full();
  for (const auto& g : gens) {
    if (g.size() != ground.size()) fail(ErrorKind::InvalidArgument, "generator length differs from ground");
    z &= zero_set(g);
  }
  if (z == 0) fail(ErrorKind::NotAnIdeal, "generators have no common zero");
  return Principal{z};
}

bool filter_contains(const FilterDesc& f, Subset s) {
  if (const auto* p = std::get_if<Principal>(&f)) return (p->base & ~s) == 0;
  fail(ErrorKind::InvalidArgument, "the Frechet filter has no finite-ground members test");
}

bool ideal_membership(const GroundFunction& s, const FilterDesc& f) { return filter_contains(f, zero_set(s)); }

CoFilterDesc co_filter_of(const FilterDesc& f) {
  if (const auto* p = std::get_if<Principal>(&f)) return PrincipalCo{p->base};
  return FiniteSets{};
}

FilterDesc filter_of_co_filter(const CoFilterDesc& c) {
  if (const auto* p = std::get_if<PrincipalCo>(&c)) return Principal{p->base};
  return FrechetStub{};
}

bool co_filter_contains(const CoFilterDesc& c, Subset s, const GroundSet& ground) {
  if (const auto* p = std::get_if<PrincipalCo>(&c)) return (s & p->base) == 0 && (s & ~ground.full()) == 0;
  return true;  // every subset of a finite ground is finite
}

bool is_ultrafilter(const FilterDesc& f, const GroundSet& ground) {
  const auto* p = std::get_if<Principal>(&f);
  if (!p) return false;
  Subset b = p->base & ground.full();
  return b != 0 && (b & (b - 1)) == 0;
}

BinMeasure measure_of(const FilterDesc& f, const GroundSet& ground) {
  if (!is_ultrafilter(f, ground)) fail(ErrorKind::NotAMeasure, "filter is not an ultrafilter");
  if (ground.size() > 20) fail(ErrorKind::InvalidArgument, "ground too large for a measure table");
  BinMeasure mu{ground.size(), std::vector<std::uint8_t>(std::size_t{1} << ground.size())};
  for (Subset s = 0; s <= ground.full(); ++s) mu.values[s] = filter_contains(f, s) ? 1 : 0;
  return mu;
}

FilterDesc ultrafilter_of(const BinMeasure& mu) {
  std::size_t n = mu.ground_size;
  if (n > 20 || mu.values.size() != (std::size_t{1} << n)) fail(ErrorKind::NotAMeasure, "table size");
  Subset full = (Subset{1} << n) - 1;
  for (auto v : mu.values)
    if (v > 1) fail(ErrorKind::NotAMeasure, "value outside {0,1}");
  if (mu(full) != 1) fail(ErrorKind::NotAMeasure, "mu(I) != 1");
  if (mu(0) != 0) fail(ErrorKind::NotAMeasure, "mu(empty) != 0");
  for (Subset a = 0; a <= full; ++a) {
    Subset rest = full & ~a;
    // iterate over subsets b of the complement of a
    for (Subset b = rest;; b = (b - 1) & rest) {
      if (mu(a | b) != mu(a) + mu(b)) fail(ErrorKind::NotAMeasure, "not additive");
      if (b == 0) break;
    }
  }
  Subset base = full;
  for (Subset s = 0; s <= full; ++s)
    if (mu(s)) base &= s;
  return Principal{base};
}

// ---------------------------------------------------------------- EPSet

namespace {

void sort_unique(std::vector<std::uint64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool has(const std::vector<std::uint64_t>& v, std::uint64_t x) { return std::binary_search(v.begin(), v.end(), x); }

std::uint64_t lcm64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t l = std::lcm(a, b);
  if (l > (std::uint64_t{1} << 32)) fail(ErrorKind::InvalidArgument, "modulus too large");
  return l;
}

// Rebuild exceptions for a pattern from an exact membership predicate.
template <class Pred>
EPSet with_exceptions(std::uint64_t k, std::vector<std::uint64_t> residues, const std::vector<std::uint64_t>& probe,
                      Pred actual) {
  EPSet r;
  r.modulus = k;
  r.residues = std::move(residues);
  for (auto n : probe) {
    bool base = has(r.residues, n % k);
    bool is = actual(n);
    if (is && !base) r.added.push_back(n);
    if (!is && base) r.removed.push_back(n);
  }
  sort_unique(r.added);
  sort_unique(r.removed);
  return r;
}

}  // namespace

EPSet EPSet::periodic(std::uint64_t modulus, std::vector<std::uint64_t> residues) {
  if (modulus == 0) fail(ErrorKind::InvalidArgument, "modulus 0");
  for (auto r : residues)
    if (r >= modulus) fail(ErrorKind::InvalidArgument, "residue out of range");
  sort_unique(residues);
  EPSet s;
  s.modulus = modulus;
  s.residues = std::move(residues);
  return s;
}

EPSet EPSet::finite(std::vector<std::uint64_t> points) {
  EPSet s = none();
  sort_unique(points);
  s.added = std::move(points);
  return s;
}

void validate(const EPSet& s) {
  if (s.modulus == 0) fail(ErrorKind::InvalidArgument, "modulus 0");
  if (!std::is_sorted(s.residues.begin(), s.residues.end())) fail(ErrorKind::InvalidArgument, "residues unsorted");
  for (auto r : s.residues)
    if (r >= s.modulus) fail(ErrorKind::InvalidArgument, "residue out of range");
  for (auto n : s.added)
    if (has(s.residues, n % s.modulus)) fail(ErrorKind::InvalidArgument, "added point already in pattern");
  for (auto n : s.removed)
    if (!has(s.residues, n % s.modulus)) fail(ErrorKind::InvalidArgument, "removed point not in pattern");
}

bool EPSet::pattern_contains(std::uint64_t n) const { return has(residues, n % modulus); }

bool EPSet::contains(std::uint64_t n) const {
  if (has(added, n)) return true;
  if (has(removed, n)) return false;
  return pattern_contains(n);
}

EPSet EPSet::complement() const {
  EPSet c;
  c.modulus = modulus;
  for (std::uint64_t r = 0; r < modulus; ++r)
    if (!has(residues, r)) c.residues.push_back(r);
  c.added = removed;
  c.removed = added;
  return c;
}

EPSet EPSet::reduced() const {
  for (std::uint64_t d = 1; d < modulus; ++d) {
    if (modulus % d) continue;
    bool periodic = true;
    for (std::uint64_t r = 0; r < modulus && periodic; ++r) periodic = has(residues, r) == has(residues, r % d);
    if (!periodic) continue;
    std::vector<std::uint64_t> res;
    for (auto r : residues)
      if (r < d) res.push_back(r);
    EPSet out = *this;
    out.modulus = d;
    out.residues = std::move(res);
    return out;
  }
  return *this;
}

EPSet operator|(const EPSet& a, const EPSet& b) {
  std::uint64_t k = lcm64(a.modulus, b.modulus);
  std::vector<std::uint64_t> res;
  for (std::uint64_t r = 0; r < k; ++r)
    if (a.pattern_contains(r) || b.pattern_contains(r)) res.push_back(r);
  std::vector<std::uint64_t> probe = a.added;
  for (const auto* v : {&a.removed, &b.added, &b.removed}) probe.insert(probe.end(), v->begin(), v->end());
  return with_exceptions(k, std::move(res), probe, [&](std::uint64_t n) { return a.contains(n) || b.contains(n); })
      .reduced();
}

EPSet operator&(const EPSet& a, const EPSet& b) {
  std::uint64_t k = lcm64(a.modulus, b.modulus);
  std::vector<std::uint64_t> res;
  for (std::uint64_t r = 0; r < k; ++r)
    if (a.pattern_contains(r) && b.pattern_contains(r)) res.push_back(r);
  std::vector<std::uint64_t> probe = a.added;
  for (const auto* v : {&a.removed, &b.added, &b.removed}) probe.insert(probe.end(), v->begin(), v->end());
  return with_exceptions(k, std::move(res), probe, [&](std::uint64_t n) { return a.contains(n) && b.contains(n); })
      .reduced();
}

bool frechet_contains(const EPSet& s) { return s.is_cofinite(); }

// ---------------------------------------------------------------- oracle

void UltrafilterOracle::commit(std::uint64_t modulus, std::uint64_t residue) {
  if (modulus == 0 || residue >= modulus) fail(ErrorKind::InvalidArgument, "residue must lie in [0, modulus)");
  for (const auto& [m, r] : commitments_) {
    std::uint64_t g = std::gcd(m, modulus);
    if (residue % g != r % g)
      fail(ErrorKind::IncoherentCommitment, "residue " + std::to_string(residue) + " mod " + std::to_string(modulus) +
                                                " conflicts with " + std::to_string(r) + " mod " + std::to_string(m));
  }
  commitments_[modulus] = residue;
}

std::vector<std::uint64_t> UltrafilterOracle::candidates(std::uint64_t modulus) const {
  if (modulus == 0) fail(ErrorKind::InvalidArgument, "modulus 0");
  // combine r = res(m) mod gcd(m, k) into one congruence r = c mod L, L | k
  std::uint64_t c = 0, L = 1;
  for (const auto& [m, r] : commitments_) {
    std::uint64_t g = std::gcd(m, modulus);
    std::uint64_t target = r % g;
    // find x = c mod L, x = target mod g; x mod lcm(L,g)
    std::uint64_t nl = std::lcm(L, g);
    std::uint64_t x = c;
    while (x % g != target) x += L;
    c = x % nl;
    L = nl;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = c; r < modulus; r += L) out.push_back(r);
  return out;
}

std::optional<std::uint64_t> UltrafilterOracle::residue(std::uint64_t modulus) const {
  auto c = candidates(modulus);
  if (c.size() == 1) return c[0];
  return std::nullopt;
}

Decision UltrafilterOracle::decide(const EPSet& s) {
  EPSet r = s.reduced();
  if (r.is_finite()) return {Decision::Kind::No, 0};
  if (r.is_cofinite()) return {Decision::Kind::Yes, 0};
  auto cand = candidates(r.modulus);
  std::size_t inside = 0;
  for (auto c : cand) inside += has(r.residues, c) ? 1 : 0;
  if (inside == cand.size()) return {Decision::Kind::Yes, 0};
  if (inside == 0) return {Decision::Kind::No, 0};
  if (policy_ == Policy::AutoLeastResidue) {
    commit(r.modulus, cand.front());
    return has(r.residues, cand.front()) ? Decision{Decision::Kind::Yes, 0} : Decision{Decision::Kind::No, 0};
  }
  return {Decision::Kind::NeedCommitment, r.modulus};
}

bool UltrafilterOracle::contains(const EPSet& s) {
  Decision d = decide(s);
  if (d.kind == Decision::Kind::NeedCommitment) throw NeedCommitment(d.modulus);
  return d.kind == Decision::Kind::Yes;
}

MeasureValue measure_value(UltrafilterOracle& oracle, const EPSet& s) {
  Policy saved = oracle.policy();
  oracle.set_policy(Policy::ExplicitOnly);
  Decision d = oracle.decide(s);
  oracle.set_policy(saved);
  switch (d.kind) {
    case Decision::Kind::Yes: return MeasureValue::One;
    case Decision::Kind::No: return MeasureValue::Zero;
    default: return MeasureValue::Undecided;
  }
}

bool dichotomy_check(UltrafilterOracle& oracle, const EPSet& s) {
  bool in = oracle.contains(s);
  bool out = oracle.contains(s.complement());
  return in != out;
}

}  // namespace nsa::filters
