#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "nsa/loeb.hpp"

using namespace nsa;
using namespace nsa::loeb;

namespace {

const HyperRational W = HyperRational::omega();
const HyperRational EPS = HyperRational::epsilon();

Poly P(std::vector<Rational> c) { return Poly(std::move(c)); }

// Exact integral of a polynomial over [0,1] from its antiderivative.
Rational antiderivative_01(const Poly& p) {
  Rational s;
  for (std::size_t m = 0; m < p.coeffs().size(); ++m) s += p.coeffs()[m] / Rational(static_cast<long>(m + 1));
  return s;
}

Rational integral_01(const SymFunc& f) {
  Rational s;
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    const auto& c = f.pieces()[i].coeffs();
    Rational a = f.breaks()[i], b = f.breaks()[i + 1];
    for (std::size_t m = 0; m < c.size(); ++m) {
      long k = static_cast<long>(m + 1);
      s += c[m] * (pow(b, k) - pow(a, k)) / Rational(k);
    }
  }
  return s;
}

Poly random_poly(std::mt19937_64& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg), coef(-5, 5);
  std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : c) x = Rational(coef(rng), 1 + static_cast<long>(rng() % 3));
  return Poly(c);
}

// Breakpoints with denominators dividing 10, so standard grids 10 and 100 see them.
SymFunc random_func(std::mt19937_64& rng) {
  std::vector<Rational> b{0, 1};
  int k = static_cast<int>(rng() % 3);
  for (int i = 0; i < k; ++i) b.emplace_back(Rational(1 + static_cast<long>(rng() % 9), 10));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<Poly> p;
  std::vector<Rational> v;
  for (std::size_t i = 0; i < b.size(); ++i) {
    v.emplace_back(static_cast<long>(rng() % 7) - 3);
    if (i + 1 < b.size()) p.push_back(random_poly(rng, 3));
  }
  return SymFunc(b, p, v);
}

std::vector<Rational> sample_points(const SymFunc& f, const SymFunc& g) {
  std::vector<Rational> pts;
  for (long k = 0; k <= 60; ++k) pts.emplace_back(Rational(k, 60));
  for (const auto& b : common_breaks(f, g)) pts.push_back(b);
  return pts;
}

}  // namespace

// ---------------------------------------------------------------- SymFunc and lattice

TEST(SymFunc, CanonicalForm) {
  auto f = SymFunc::piecewise({0, Rational(1, 2), 1}, {Poly::x(), Poly::x()});
  EXPECT_EQ(f, SymFunc::x());
  EXPECT_EQ(f.breaks().size(), 2u);
  EXPECT_THROW(SymFunc({0, Rational(1, 2)}, {Poly(1)}, {0, 0}), Error);
  EXPECT_THROW(SymFunc::indicator({RInterval::closed(0, 2)}), Error);
  auto chi = SymFunc::indicator({RInterval{Rational(0), Rational(1, 2), false, true}});
  EXPECT_EQ(chi.eval(Rational(1, 2)), Rational(0));
  EXPECT_EQ(chi.eval(Rational(1, 4)), Rational(1));
}

TEST(Lattice, Examples) {
  auto one_minus_x = SymFunc(P({1, -1}));
  auto m = min(SymFunc::x(), one_minus_x);
  EXPECT_EQ(m.breaks(), (std::vector<Rational>{0, Rational(1, 2), 1}));
  EXPECT_EQ(m.pieces()[0], Poly::x());
  EXPECT_EQ(m.pieces()[1], P({1, -1}));

  auto v = abs(SymFunc(P({Rational(-1, 2), 1})));
  EXPECT_EQ(v.breaks(), (std::vector<Rational>{0, Rational(1, 2), 1}));
  EXPECT_EQ(v.eval(0), Rational(1, 2));
  EXPECT_EQ(v.eval(Rational(1, 2)), Rational(0));
  EXPECT_EQ(v.eval(1), Rational(1, 2));

  auto f = SymFunc(P({Rational(1, 3), -2, 1}));
  EXPECT_EQ(max(f, f), f);
  EXPECT_THROW(max(SymFunc(P({0, 0, 1})), SymFunc(Rational(1, 2))), Error);
}

TEST(Lattice, PointwiseOracle) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    auto f = random_func(rng), g = random_func(rng);
    SymFunc mx, mn, half_formula, pf, nf;
    try {
      mx = max(f, g);
      mn = min(f, g);
      half_formula = SymFunc(Rational(1, 2)) * (f + g - abs(f - g));
      pf = pos_part(f);
      nf = neg_part(f);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFunctionClass);
      continue;
    }
    ++checked;
    for (const auto& x : sample_points(f, g)) {
      EXPECT_EQ(mx.eval(x), std::max(f.eval(x), g.eval(x)));
      EXPECT_EQ(mn.eval(x), std::min(f.eval(x), g.eval(x)));
      EXPECT_EQ(pf.eval(x), std::max(f.eval(x), Rational(0)));
    }
    // min(f,g) = (f + g - |f - g|)/2 and f = f+ - f-, symbolically
    EXPECT_EQ(mn, half_formula);
    EXPECT_EQ(f, pf - nf);
    EXPECT_TRUE(pf.nonnegative());
    EXPECT_TRUE(nf.nonnegative());
  }
  EXPECT_GE(checked, 10);
}

// ---------------------------------------------------------------- internal integral

TEST(Integral, Golden) {
  auto sq = SymFunc(P({0, 0, 1}));
  EXPECT_EQ(internal_integral(Grid{W}, sq), (W - 1) * W * (W * 2 - 1) / (HyperRational(6) * W.pow(3)));
  EXPECT_EQ(internal_integral(Grid{W}, SymFunc(1)), HyperRational(1));
  auto chi = SymFunc::indicator({RInterval::closed(0, Rational(1, 2))});
  EXPECT_EQ(internal_integral(Grid{W * 2}, chi), (W + 1) / (W * 2));
  EXPECT_EQ(Grid::for_function(chi).size, W * 2);
  EXPECT_EQ(internal_integral(Grid{HyperRational(10)}, sq), direct_grid_sum(sq, 10));
  EXPECT_EQ(internal_integral(Grid{HyperRational(100)}, sq), direct_grid_sum(sq, 100));
}

TEST(Integral, GridChecks) {
  auto third = SymFunc::indicator({RInterval::closed(0, Rational(1, 3))});
  EXPECT_THROW(internal_integral(Grid{W}, third), Error);
  EXPECT_THROW(internal_integral(Grid{HyperRational(10)}, third), Error);
  EXPECT_THROW(internal_integral(Grid{W / HyperRational(2)}, SymFunc(1)), Error);
  EXPECT_NO_THROW(internal_integral(Grid{W * 3}, third));
}

TEST(Integral, StandardGridsMatchDirectSums) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    auto f = random_func(rng);
    for (long n : {10L, 20L, 100L}) EXPECT_EQ(internal_integral(Grid{HyperRational(n)}, f), HyperRational(direct_grid_sum(f, n)));
  }
}

TEST(Integral, LinearAndPositive) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    auto f = random_func(rng), g = random_func(rng);
    Rational a(static_cast<long>(rng() % 7) - 3, 2), b(static_cast<long>(rng() % 5) - 2);
    Grid gr{W * 10};
    EXPECT_EQ(internal_integral(gr, SymFunc(a) * f + SymFunc(b) * g),
              HyperRational(a) * internal_integral(gr, f) + HyperRational(b) * internal_integral(gr, g));
    EXPECT_GE(internal_integral(gr, f * f), HyperRational(0));
    try {
      EXPECT_GE(internal_integral(gr, abs(f)), HyperRational(0));
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFunctionClass);
    }
  }
}

TEST(Integral, RightEndpointsAreInfinitelyClose) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    auto f = random_func(rng);
    Grid g = Grid::for_function(f);
    EXPECT_TRUE(infinitely_close(internal_integral(g, f), internal_integral_right(g, f)));
  }
}

// ---------------------------------------------------------------- standardization

TEST(Standardize, Monomials) {
  for (std::size_t d = 0; d <= 6; ++d)
    EXPECT_EQ(standardize(SymFunc(Poly::monomial(1, d))), Rational(1, static_cast<long>(d + 1)));
  EXPECT_EQ(standardize(SymFunc(1)), Rational(1));
}

TEST(Standardize, PolynomialsMatchAntiderivative) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    Poly p = random_poly(rng, 6);
    EXPECT_EQ(standardize(SymFunc(p)), antiderivative_01(p));
  }
  for (int t = 0; t < 30; ++t) {
    auto f = random_func(rng);
    EXPECT_EQ(standardize(f), integral_01(f));
  }
}

TEST(Standardize, GridInvariance) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    auto f = random_func(rng);
    Rational s = standardize(f);
    Grid g1 = Grid::for_function(f, 1), g2 = Grid::for_function(f, 2);
    EXPECT_EQ(standard_part(internal_integral(g1, f)), s);
    EXPECT_EQ(standard_part(internal_integral(g2, f)), s);
    EXPECT_EQ(standard_part(internal_integral(Grid{g1.size * 7}, f)), s);
  }
}

TEST(Standardize, TwoDecompositionsAgree) {
  // f = phi + g = phi' + g' with g, g' null
  auto f = SymFunc(P({1, 2, -1}));
  HyperFunc d1 = HyperFunc(f - SymFunc::x()) + HyperFunc(SymFunc::x()) + HyperFunc(EPS, SymFunc::x());
  HyperFunc d2 = HyperFunc(f) + HyperFunc(-EPS * EPS, SymFunc(1));
  EXPECT_EQ(standardize(d1), standardize(f));
  EXPECT_EQ(standardize(d2), standardize(f));
}

TEST(Standardize, InfiniteIntegral) {
  try {
    standardize(HyperFunc(W, SymFunc::x()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfiniteIntegral);
  }
}

TEST(Standardize, LinearAndPositive) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    auto f = random_func(rng), g = random_func(rng);
    Rational a(static_cast<long>(rng() % 9) - 4, 3);
    EXPECT_EQ(standardize(SymFunc(a) * f + g), a * standardize(f) + standardize(g));
    EXPECT_GE(standardize(f * f), Rational(0));
  }
}

// ---------------------------------------------------------------- null functions

TEST(Null, Examples) {
  EXPECT_TRUE(is_null(HyperFunc(EPS, SymFunc::x())));
  EXPECT_FALSE(is_null(HyperFunc(SymFunc::x())));
  EXPECT_TRUE(is_null(HyperFunc(SymFunc(0))));
  EXPECT_TRUE(is_null(HyperFunc()));
  EXPECT_FALSE(is_null(HyperFunc(W, SymFunc::x())));
  // a function that is zero off one point is null
  EXPECT_TRUE(is_null(HyperFunc(SymFunc({0, Rational(1, 2), 1}, {Poly(0), Poly(0)}, {0, 5, 0}))));
}

TEST(Null, InfiniteTermsThatCancel) {
  EXPECT_TRUE(is_null(HyperFunc(W, SymFunc::x()) + HyperFunc(-W, SymFunc::x())));
  EXPECT_FALSE(is_null(HyperFunc(W + 1, SymFunc::x()) + HyperFunc(-W, SymFunc::x())));
  EXPECT_TRUE(is_null(HyperFunc(W + EPS, SymFunc::x()) + HyperFunc(-W, SymFunc::x())));
  EXPECT_TRUE(is_null(HyperFunc(W, SymFunc(2) * SymFunc::x()) + HyperFunc(W * -2, SymFunc::x())));
}

TEST(Null, IdealProperties) {
  std::mt19937_64 rng(17);
  std::vector<HyperRational> small{EPS, EPS * 3, -EPS, HyperRational::omega_pow(Rational(-1, 2)), EPS * EPS};
  for (int t = 0; t < 30; ++t) {
    auto g1 = HyperFunc(small[rng() % small.size()], random_func(rng));
    auto g2 = HyperFunc(small[rng() % small.size()], random_func(rng));
    ASSERT_TRUE(is_null(g1));
    ASSERT_TRUE(is_null(g2));
    EXPECT_TRUE(is_null(g1 + g2));
    EXPECT_TRUE(is_null(random_func(rng) * g1));
  }
}

// ---------------------------------------------------------------- sandwich and MCT

TEST(Sandwich, Examples) {
  auto r = sandwich_check(SymFunc(P({0, 0, 1})), Rational(1, 10));
  EXPECT_TRUE(r.verdict);
  EXPECT_LE(r.lower, Rational(1, 3));
  EXPECT_GE(r.upper, Rational(1, 3));
  EXPECT_EQ(r.value, Rational(1, 3));
  EXPECT_TRUE(sandwich_check(SymFunc(P({0, 0, 1})), Rational(1000)).verdict);
  EXPECT_THROW(sandwich_check(SymFunc(1), Rational(0)), Error);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    auto f = random_func(rng);
    try {
      EXPECT_TRUE(sandwich_check(f, Rational(1, 7)).verdict);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFunctionClass);
    }
  }
}

TEST(Mct, GeometricDemo) {
  auto r = geometric_demo(8);
  EXPECT_TRUE(r.ok());
  ASSERT_EQ(r.values.size(), 8u);
  // I# f_n = sum_{j<=n} 1/((j+1) 2^j)
  Rational s;
  for (unsigned j = 1; j <= 8; ++j) {
    s += Rational(1) / (Rational(static_cast<long>(j + 1)) * pow(Rational(2), static_cast<long>(j)));
    EXPECT_EQ(r.values[j - 1], s);
  }
  EXPECT_LE(r.gap, Rational(1, 256));
}

TEST(Mct, ConstantAndDecreasing) {
  auto f = SymFunc(P({1, 1}));
  auto r = monotone_convergence_check([&](unsigned) { return f; }, f, 5, Rational(0));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.gap, Rational(0));
  for (const auto& v : r.values) EXPECT_EQ(v, Rational(3, 2));
  try {
    monotone_convergence_check([](unsigned n) { return SymFunc(Rational(1, static_cast<long>(n))); }, SymFunc(0), 4, Rational(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMonotone);
  }
}

// ---------------------------------------------------------------- Loeb measure

TEST(Measure, Examples) {
  EXPECT_EQ(loeb_measure({RInterval::closed(0, Rational(1, 2))}), Rational(1, 2));
  EXPECT_EQ(loeb_measure({RInterval::closed(0, Rational(1, 3)), RInterval::closed(Rational(2, 3), 1)}), Rational(2, 3));
  EXPECT_EQ(loeb_measure({}), Rational(0));
  EXPECT_EQ(loeb_measure({RInterval::point(Rational(1, 5))}), Rational(0));
}

TEST(Measure, RandomUnionsAdditiveAndMonotone) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    // k disjoint pieces from sorted distinct points
    int k = 1 + static_cast<int>(rng() % 4);
    long den = 2 + static_cast<long>(rng() % 11);
    std::vector<Rational> pts;
    while (pts.size() < static_cast<std::size_t>(2 * k)) {
      Rational p(static_cast<long>(rng() % static_cast<unsigned long>(den + 1)), den);
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
      if (pts.size() > static_cast<std::size_t>(den)) break;
    }
    if (pts.size() % 2) pts.pop_back();
    std::sort(pts.begin(), pts.end());
    IntervalUnion a;
    Rational length;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      a.push_back(RInterval{pts[i], pts[i + 1], rng() % 2 == 0, rng() % 2 == 0});
      length += pts[i + 1] - pts[i];
    }
    EXPECT_EQ(loeb_measure(a), length);
    if (a.size() >= 2) {
      IntervalUnion first(a.begin(), a.begin() + 1), rest(a.begin() + 1, a.end());
      EXPECT_EQ(loeb_measure(first) + loeb_measure(rest), loeb_measure(a));
      EXPECT_LE(loeb_measure(first), loeb_measure(a));
    }
  }
}
