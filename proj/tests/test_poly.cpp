#include <gtest/gtest.h>

#include <random>

#include "nsa/error.hpp"
#include "nsa/mpoly.hpp"
#include "nsa/poly.hpp"

using namespace nsa;

namespace {

Poly from_roots(std::initializer_list<Rational> roots) {
  Poly p(1);
  for (const auto& r : roots) p *= Poly(std::vector<Rational>{-r, 1});
  return p;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("6/4").to_string(), "3/2");
  EXPECT_EQ(Rational::parse(" -7 ").to_string(), "-7");
  EXPECT_EQ(Rational::parse("0/5"), Rational(0));
  EXPECT_THROW(Rational::parse("1/0"), Error);
  EXPECT_THROW(Rational::parse("x"), Error);
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
}

TEST(Poly, ArithmeticAndDivision) {
  Poly a = from_roots({1, 2, 3});
  Poly b = from_roots({2, 5});
  auto [q, r] = Poly::divmod(a * b + Poly(7), b);
  EXPECT_EQ(q, a);
  EXPECT_EQ(r, Poly(7));
  EXPECT_EQ(Poly::gcd(a, b), from_roots({2}));
  EXPECT_EQ(a.derivative().eval(0), Rational(11));
}

TEST(Poly, PowerSumsMatchDirectSums) {
  for (unsigned m = 0; m <= 8; ++m) {
    Rational direct;
    for (long n = 0; n <= 25; ++n) {
      if (n > 0) direct += pow(Rational(n), static_cast<long>(m));
      EXPECT_EQ(power_sum(m).eval(n), direct) << "m=" << m << " n=" << n;
    }
  }
}

TEST(Poly, SturmCountsKnownRoots) {
  Poly p = from_roots({-3, Rational(1, 2), 2, 7});
  EXPECT_EQ(count_real_roots(p), 4);
  EXPECT_EQ(count_roots_open(p, 0, 2), 1);   // 2 excluded
  EXPECT_EQ(count_roots_open(p, 0, 3), 2);
  EXPECT_EQ(count_roots_open(p, -3, 7), 2);  // both ends excluded
  Poly q(std::vector<Rational>{-2, 0, 1});   // x^2 - 2
  EXPECT_EQ(count_real_roots(q), 2);
  EXPECT_EQ(count_roots_open(q, 1, 2), 1);
  EXPECT_TRUE(rational_roots(q).empty());
  Poly irreducible(std::vector<Rational>{1, 0, 1});
  EXPECT_EQ(count_real_roots(irreducible), 0);
}

TEST(Poly, RationalRootsRandom) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 5);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<Rational> roots;
    Poly p(Rational(den(rng)));
    int k = 1 + iter % 4;
    for (int i = 0; i < k; ++i) {
      Rational r(num(rng), den(rng));
      roots.push_back(r);
      p *= Poly(std::vector<Rational>{-r, 1});
    }
    p *= Poly(std::vector<Rational>{3, 0, 1});  // no real roots
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    EXPECT_EQ(rational_roots(p), roots);
  }
}

TEST(Poly, NonnegativityExact) {
  Poly sq = from_roots({Rational(1, 3), Rational(1, 3)});  // (x-1/3)^2
  EXPECT_TRUE(nonnegative_on(sq, 0, 1));
  Poly cross = from_roots({Rational(1, 3)});
  EXPECT_FALSE(nonnegative_on(cross, 0, 1));
  EXPECT_TRUE(nonnegative_on(cross, Rational(1, 3), 1));
  Poly irr(std::vector<Rational>{-2, 0, 1});  // negative on [0, sqrt 2)
  EXPECT_FALSE(nonnegative_on(irr, 0, 2));
  EXPECT_TRUE(nonnegative_on(irr, Rational(3, 2), 2));
  // odd multiplicity 3 root inside
  EXPECT_FALSE(nonnegative_on(from_roots({Rational(1, 2), Rational(1, 2), Rational(1, 2)}), 0, 1));
}

TEST(Poly, NonnegativityAgreesWithDenseSampling) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Rational> cs;
    for (int i = 0; i < 4; ++i) cs.emplace_back(c(rng));
    Poly p(cs);
    bool sampled = true;
    for (int k = 0; k <= 400; ++k)
      if (p.eval(Rational(k, 400)).sign() < 0) sampled = false;
    // sampling can only miss negativity, never invent it
    if (!sampled) EXPECT_FALSE(nonnegative_on(p, 0, 1));
    if (nonnegative_on(p, 0, 1)) EXPECT_TRUE(sampled);
  }
}

TEST(MPoly, EvalTemplate) {
  MPoly x = MPoly::variable(2, 0), y = MPoly::variable(2, 1);
  MPoly p = x * x - y * MPoly::constant(2, 3);
  std::vector<Rational> args{2, Rational(1, 3)};
  EXPECT_EQ(p.eval<Rational>(std::span<const Rational>(args)), Rational(3));
}

TEST(Poly, ModularCoprimalityIsSound) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-4, 4), deg(0, 3);
  auto gen = [&] {
    std::vector<Rational> v;
    int d = deg(rng);
    for (int i = 0; i <= d; ++i) v.push_back(Rational(c(rng), 1 + (rng() % 3)));
    Poly p(v);
    return p.is_zero() ? Poly(1) : p;
  };
  int proved = 0;
  for (int it = 0; it < 2000; ++it) {
    Poly common = gen();
    Poly a = gen() * common, b = gen() * common;
    bool exact = Poly::gcd(a, b).degree() == 0;
    if (Poly::coprime_mod_p(a, b)) {
      ++proved;
      EXPECT_TRUE(exact) << a.to_string() << " | " << b.to_string();
    }
  }
  EXPECT_GT(proved, 100);
}
