#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nsa/filters.hpp"

using namespace nsa;
using namespace nsa::filters;

namespace {

constexpr int kIterations = 2000;

EPSet random_epset(std::mt19937_64& rng) {
  static const std::uint64_t mods[] = {1, 2, 3, 4, 6, 8, 12};
  std::uint64_t k = mods[rng() % 7];
  std::vector<std::uint64_t> res;
  for (std::uint64_t r = 0; r < k; ++r)
    if (rng() % 2) res.push_back(r);
  EPSet s = EPSet::periodic(k, res);
  for (int i = 0; i < 3; ++i) {
    std::uint64_t n = rng() % 40;
    if (s.pattern_contains(n))
      s.removed.push_back(n);
    else
      s.added.push_back(n);
  }
  for (auto* v : {&s.added, &s.removed}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return s;
}

}  // namespace

TEST(Filters, ZeroSetFilterOfIdeal) {
  GroundSet g = GroundSet::of_size(3);
  std::vector<GroundFunction> gens{{0, 1, 0}, {0, 0, 2}};
  EXPECT_EQ(std::get<Principal>(filter_of_ideal_gens(g, gens)).base, Subset{1});
  std::vector<GroundFunction> units{{1, 0, 0}, {0, 1, 1}};
  try {
    filter_of_ideal_gens(g, units);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnIdeal);
  }
}

// Brute-force oracle: zero sets of all small ring combinations of the generators.
TEST(Filters, IdealFilterMatchesBruteForceCombinations) {
  GroundSet g = GroundSet::of_size(3);
  std::vector<GroundFunction> gens{{0, 1, 0}, {0, 0, 2}};
  std::set<Subset> zeros;
  const Rational coeffs[] = {-1, 0, 1, 2};
  // r_g ranges over functions with values in coeffs at each point
  for (int a = 0; a < 64; ++a)
    for (int b = 0; b < 64; ++b) {
      GroundFunction s(3);
      for (int i = 0; i < 3; ++i) {
        Rational ra = coeffs[(a >> (2 * i)) & 3], rb = coeffs[(b >> (2 * i)) & 3];
        s[i] = ra * gens[0][i] + rb * gens[1][i];
      }
      zeros.insert(zero_set(s));
    }
  FilterDesc f = filter_of_ideal_gens(g, gens);
  for (Subset s = 0; s <= g.full(); ++s) EXPECT_EQ(zeros.count(s) == 1, filter_contains(f, s)) << s;
}

TEST(Filters, RoundTripsExhaustiveSmallGrounds) {
  for (std::size_t n = 1; n <= 4; ++n) {
    GroundSet g = GroundSet::of_size(n);
    for (Subset z = 1; z <= g.full(); ++z) {
      // ideal of functions vanishing on z, generated by point indicators off z
      std::vector<GroundFunction> gens;
      for (std::size_t i = 0; i < n; ++i)
        if (!(z >> i & 1)) {
          GroundFunction e(n, 0);
          e[i] = 1;
          gens.push_back(e);
        }
      if (gens.empty()) gens.push_back(GroundFunction(n, 0));
      FilterDesc f = filter_of_ideal_gens(g, gens);
      EXPECT_EQ(std::get<Principal>(f).base, z);
      // I_{F_I} = I: s is in the ideal iff it vanishes on z
      for (Subset zs = 0; zs <= g.full(); ++zs) {
        GroundFunction s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = (zs >> i & 1) ? Rational(0) : Rational(static_cast<long>(i + 1));
        EXPECT_EQ(ideal_membership(s, f), (z & ~zs) == 0);
      }
      EXPECT_EQ(filter_of_co_filter(co_filter_of(f)), f);
      for (Subset s = 0; s <= g.full(); ++s)
        EXPECT_EQ(co_filter_contains(co_filter_of(f), s, g), filter_contains(f, g.full() & ~s));
      if (is_ultrafilter(f, g)) {
        EXPECT_EQ(ultrafilter_of(measure_of(f, g)), f);
      } else {
        EXPECT_THROW(measure_of(f, g), Error);
      }
    }
  }
}

TEST(Filters, MeasureValidation) {
  BinMeasure mu{2, {0, 1, 1, 1}};  // both singletons have measure 1
  try {
    ultrafilter_of(mu);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAMeasure);
  }
  BinMeasure good{2, {0, 0, 1, 1}};
  EXPECT_EQ(std::get<Principal>(ultrafilter_of(good)).base, Subset{2});
}

TEST(Filters, EPSetAlgebraMatchesPointwise) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < kIterations; ++it) {
    EPSet a = random_epset(rng), b = random_epset(rng);
    validate(a);
    EPSet u = a | b, i = a & b, c = a.complement();
    validate(u);
    validate(i);
    validate(c);
    for (std::uint64_t n = 0; n < 120; ++n) {
      ASSERT_EQ(u.contains(n), a.contains(n) || b.contains(n));
      ASSERT_EQ(i.contains(n), a.contains(n) && b.contains(n));
      ASSERT_EQ(c.contains(n), !a.contains(n));
      ASSERT_EQ(a.reduced().contains(n), a.contains(n));
    }
  }
}

TEST(Filters, OracleNeedsCommitment) {
  UltrafilterOracle o;
  EPSet evens = EPSet::periodic(2, {0});
  auto d = o.decide(evens);
  EXPECT_EQ(d.kind, Decision::Kind::NeedCommitment);
  EXPECT_EQ(d.modulus, 2u);
  o.commit(2, 0);
  EXPECT_TRUE(o.contains(evens));
  EXPECT_FALSE(o.contains(evens.complement()));
  // modulus 4 is still open, modulus 4 residues {0,2} reduce to evens
  EXPECT_TRUE(o.contains(EPSet::periodic(4, {0, 2})));
  EXPECT_EQ(o.decide(EPSet::periodic(4, {0})).kind, Decision::Kind::NeedCommitment);
  EXPECT_FALSE(o.contains(EPSet::periodic(4, {1, 3})));
}

TEST(Filters, OracleCoherence) {
  UltrafilterOracle o;
  o.commit(4, 1);
  EXPECT_EQ(*o.residue(2), 1u);
  try {
    o.commit(2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncoherentCommitment);
  }
  // gcd(4,6) = 2: residue mod 6 must be odd
  EXPECT_THROW(o.commit(6, 0), Error);
  o.commit(6, 3);
  EXPECT_EQ(*o.residue(12), 9u);
  EXPECT_EQ(o.candidates(3), std::vector<std::uint64_t>{0});
}

TEST(Filters, FreenessIgnoresFiniteChanges) {
  UltrafilterOracle o;
  EXPECT_FALSE(o.contains(EPSet::finite({1, 2, 3})));
  EPSet cof = EPSet::finite({5}).complement();
  EXPECT_TRUE(o.contains(cof));
  EXPECT_TRUE(frechet_contains(cof));
  EXPECT_FALSE(frechet_contains(EPSet::periodic(2, {0})));
}

TEST(Filters, AutoPolicyCommitsLeastResidue) {
  UltrafilterOracle o(Policy::AutoLeastResidue);
  EXPECT_TRUE(o.contains(EPSet::periodic(3, {0})));
  EXPECT_EQ(o.commitments().at(3), 0u);
  EXPECT_FALSE(o.contains(EPSet::periodic(5, {1, 2})));
  EXPECT_EQ(o.commitments().at(5), 0u);
}

TEST(Filters, DichotomyAndUnionProperty) {
  std::mt19937_64 rng(2);
  UltrafilterOracle o(Policy::AutoLeastResidue);
  for (int it = 0; it < kIterations; ++it) {
    EPSet a = random_epset(rng), b = random_epset(rng);
    EXPECT_TRUE(dichotomy_check(o, a));
    EXPECT_EQ(o.contains(a | b), o.contains(a) || o.contains(b));
    EXPECT_EQ(o.contains(a & b), o.contains(a) && o.contains(b));
  }
}

TEST(Filters, MeasureOfOracleSets) {
  UltrafilterOracle o;
  EXPECT_EQ(measure_value(o, EPSet::periodic(2, {1})), MeasureValue::Undecided);
  o.commit(2, 1);
  EXPECT_EQ(measure_value(o, EPSet::periodic(2, {1})), MeasureValue::One);
  EXPECT_EQ(measure_value(o, EPSet::periodic(2, {0})), MeasureValue::Zero);
}
