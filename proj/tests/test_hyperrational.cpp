#include <gtest/gtest.h>

#include <random>

#include "nsa/hyperrational.hpp"

using namespace nsa;

namespace {

constexpr int kIterations = 2000;

HyperRational w() { return HyperRational::omega(); }
HyperRational eps() { return HyperRational::epsilon(); }

// Small random element: ratio of two short generalised polynomials.
HyperRational random_hyper(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-5, 5), exp2(-4, 4), terms(1, 3);
  auto gen = [&] {
    std::vector<GenPoly::Term> ts;
    int n = terms(rng);
    for (int i = 0; i < n; ++i) ts.push_back({Rational(exp2(rng), 2), Rational(coef(rng))});
    GenPoly p(ts);
    return p.is_zero() ? GenPoly::constant(1) : p;
  };
  return HyperRational::fraction(gen(), gen());
}

}  // namespace

TEST(HyperRational, OmegaTimesEpsilonIsOne) {
  EXPECT_EQ(eps() * w(), HyperRational(1));
  EXPECT_EQ((eps() * w()).to_string(), "1");
  EXPECT_EQ(parse_hyper("eps * w"), HyperRational(1));
}

TEST(HyperRational, RenderingCanonicalForm) {
  EXPECT_EQ(parse_hyper("(2*w^2 + w)/(w^2 + 1)").to_string(), "(2*w^2 + w) / (w^2 + 1)");
  EXPECT_EQ(parse_hyper("(w^2 - 1)/(w + 1)").to_string(), "w - 1");
  EXPECT_EQ(parse_hyper("eps").to_string(), "1 / w");
  EXPECT_EQ(parse_hyper("w^(1/2) * w^(1/2)"), w());
  EXPECT_EQ(parse_hyper("(w - 1)/(w^(1/2) - 1)").to_string(), "w^(1/2) + 1");
  EXPECT_EQ(parse_hyper("4/6").to_string(), "2/3");
}

TEST(HyperRational, RoundTripThroughText) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < kIterations; ++i) {
    HyperRational x = random_hyper(rng);
    EXPECT_EQ(parse_hyper(x.to_string()), x) << x;
  }
}

TEST(HyperRational, ParseErrors) {
  EXPECT_THROW(parse_hyper("1/0"), Error);
  EXPECT_THROW(parse_hyper("w +"), Error);
  EXPECT_THROW(parse_hyper("x"), Error);
  EXPECT_THROW(parse_hyper("(w+1)^(1/2)"), Error);
  try {
    parse_hyper("2 * ) ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(HyperRational, DivisionByZero) {
  try {
    (void)(w() / HyperRational(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
}

TEST(HyperRational, OrderByLeadingTerm) {
  EXPECT_LT(HyperRational(0), eps());
  EXPECT_LT(eps(), Rational(1, 1000000));
  EXPECT_GT(w(), HyperRational(1000000));
  EXPECT_GT(w(), parse_hyper("w^(1/2) * 1000"));
  EXPECT_LT(parse_hyper("w - 1"), w());
  EXPECT_LT(-w(), HyperRational(-1000000));
}

TEST(HyperRational, StandardPartAndClassify) {
  EXPECT_EQ(classify(eps()).kind, Magnitude::Infinitesimal);
  EXPECT_EQ(classify(w()).kind, Magnitude::Infinite);
  EXPECT_EQ(standard_part(eps()), Rational(0));
  EXPECT_EQ(standard_part(parse_hyper("(2*w^2 + w)/(w^2 + 1)")), Rational(2));
  EXPECT_EQ(standard_part(parse_hyper("3 + eps")), Rational(3));
  try {
    standard_part(w());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfiniteNumber);
  }
}

TEST(HyperRational, CertifiedIntegers) {
  EXPECT_TRUE(w().integer_certified());
  EXPECT_TRUE(parse_hyper("w^2 - 3*w + 7").integer_certified());
  EXPECT_FALSE(parse_hyper("w/2").integer_certified());
  EXPECT_FALSE(parse_hyper("w^(1/2)").integer_certified());
  EXPECT_FALSE(eps().integer_certified());
  EXPECT_TRUE(parse_hyper("(w^2 - 1)/(w + 1)").integer_certified());
}

TEST(HyperRational, ClosenessRelations) {
  EXPECT_TRUE(infinitely_close(HyperRational(1), HyperRational(1) + eps()));
  EXPECT_FALSE(infinitely_close(HyperRational(1), HyperRational(2)));
  EXPECT_TRUE(same_galaxy(HyperRational(1), HyperRational(2)));
  EXPECT_TRUE(same_galaxy(w(), w() + HyperRational(5)));
  EXPECT_FALSE(same_galaxy(w(), w() * HyperRational(2)));
}

TEST(HyperRational, BetweenGalaxy) {
  HyperRational z = between_galaxy(HyperRational(0), w());
  EXPECT_EQ(z, w() / HyperRational(2));
  EXPECT_FALSE(same_galaxy(z, HyperRational(0)));
  EXPECT_FALSE(same_galaxy(z, w()));
  EXPECT_THROW(between_galaxy(HyperRational(1), HyperRational(2)), Error);
}

TEST(HyperRational, NamedMembership) {
  using namespace named;
  EXPECT_EQ(named_membership(eps(), MonZero{}), Tri::Yes);
  EXPECT_EQ(named_membership(HyperRational(1), MonZero{}), Tri::No);
  EXPECT_EQ(named_membership(HyperRational(5), GalZero{}), Tri::Yes);
  EXPECT_EQ(named_membership(w(), GalZero{}), Tri::No);
  EXPECT_EQ(named_membership(w(), StarNPlusInfinity{}), Tri::Yes);
  EXPECT_EQ(named_membership(parse_hyper("w^(1/2)"), StarNPlusInfinity{}), Tri::Unknown);
  EXPECT_EQ(named_membership(HyperRational(7), StarNPlusInfinity{}), Tri::No);
  EXPECT_EQ(named_membership(eps(), StarRPlus{}), Tri::Yes);
  EXPECT_EQ(named_membership(-eps(), StarRPlus{}), Tri::No);
  InitialSegment k{w()};
  EXPECT_EQ(named_membership(HyperRational(3), k), Tri::Yes);
  EXPECT_EQ(named_membership(w() - HyperRational(1), k), Tri::Yes);
  EXPECT_EQ(named_membership(w() + HyperRational(1), k), Tri::No);
  EXPECT_EQ(named_membership(w() / HyperRational(2), k), Tri::Unknown);
}

TEST(HyperRational, SetClassificationTable) {
  using namespace named;
  EXPECT_EQ(set_classification(MonZero{}).kind, SetKind::External);
  EXPECT_EQ(set_classification(GalZero{}).kind, SetKind::External);
  EXPECT_EQ(set_classification(StarNPlusInfinity{}).kind, SetKind::External);
  EXPECT_EQ(set_classification(StarRPlus{}).kind, SetKind::Standard);
  auto k = set_classification(InitialSegment{w()});
  EXPECT_EQ(k.kind, SetKind::InternalNonstandard);
  EXPECT_TRUE(k.hyperfinite);
  IntervalUnion u{{HInterval{HyperRational(0), eps(), false, false}}};
  EXPECT_EQ(set_classification(u).kind, SetKind::InternalNonstandard);
}

TEST(HyperRational, OrderedFieldSample) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < kIterations; ++i) {
    HyperRational a = random_hyper(rng), b = random_hyper(rng), c = random_hyper(rng);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!a.is_zero()) EXPECT_EQ(a * a.reciprocal(), HyperRational(1));
    if (a < b) EXPECT_LT(a + c, b + c);
    if (a < b && c > HyperRational(0)) EXPECT_LT(a * c, b * c);
  }
}

TEST(HyperRational, StandardPartIsRingHomomorphism) {
  std::mt19937_64 rng(9);
  int tested = 0;
  while (tested < 500) {
    HyperRational a = random_hyper(rng), b = random_hyper(rng);
    if (classify(a).kind == Magnitude::Infinite || classify(b).kind == Magnitude::Infinite) continue;
    ++tested;
    EXPECT_EQ(standard_part(a + b), standard_part(a) + standard_part(b));
    EXPECT_EQ(standard_part(a * b), standard_part(a) * standard_part(b));
    if (a <= b) EXPECT_LE(standard_part(a), standard_part(b));
  }
}
