#include "nsa/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>

#include "nsa/filters.hpp"
#include "nsa/hyperrational.hpp"
#include "nsa/loeb.hpp"
#include "nsa/nscalc.hpp"
#include "nsa/simplelang.hpp"
#include "nsa/superstruct.hpp"
#include "nsa/ultrapower_seq.hpp"

namespace nsa::suites {

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) : start_(std::chrono::steady_clock::now()) { r_.name = std::move(name); }

  void check(bool ok, const std::function<std::string()>& what) {
    ++r_.cases;
    if (ok) return;
    if (r_.failed++ == 0) r_.first_failure = what();
  }
  void add_passed(std::size_t n) { r_.cases += n; }
  // Runs f, counting an escaped Error as a failure.
  void guarded(const std::function<void()>& f, const std::string& what) {
    try {
      f();
    } catch (const Error& e) {
      check(false, [&] { return what + ": " + e.what(); });
    }
  }
  SuiteResult done() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return r_;
  }

 private:
  SuiteResult r_;
  std::chrono::steady_clock::time_point start_;
};

// Ratio of two short generalised polynomials with half-integer exponents.
HyperRational random_hyper(std::mt19937_64& rng, int den = 2) {
  std::uniform_int_distribution<int> coef(-5, 5), ex(-2 * den, 2 * den), terms(1, 3);
  auto gen = [&] {
    std::vector<GenPoly::Term> ts;
    for (int i = 0, n = terms(rng); i < n; ++i) ts.push_back({Rational(ex(rng), den), Rational(coef(rng))});
    GenPoly p(ts);
    return p.is_zero() ? GenPoly::constant(1) : p;
  };
  return HyperRational::fraction(gen(), gen());
}

SuiteResult from_report(const std::string& name, const super::SuiteReport& rep, double seconds) {
  SuiteResult r;
  r.name = name;
  r.cases = rep.cases();
  r.failed = rep.failed();
  for (const auto& c : rep.checks)
    if (c.failed) {
      r.first_failure = c.name + ": " + c.first_failure;
      break;
    }
  r.seconds = seconds;
  return r;
}

}  // namespace

SuiteResult field_axioms(std::size_t samples, std::uint64_t seed) {
  Recorder rec("fieldAxioms");
  std::mt19937_64 rng(seed);
  const HyperRational zero(0), one(1);
  for (std::size_t i = 0; i < samples; ++i) {
    HyperRational a = random_hyper(rng), b = random_hyper(rng), c = random_hyper(rng);
    auto at = [&](const char* law) {
      return [&a, &b, &c, law] { return std::string(law) + " at a=" + a.to_string() + " b=" + b.to_string() + " c=" + c.to_string(); };
    };
    rec.check((a + b) + c == a + (b + c), at("+ associative"));
    rec.check(a + b == b + a, at("+ commutative"));
    rec.check(a + zero == a, at("0 neutral"));
    rec.check(a + (-a) == zero, at("additive inverse"));
    rec.check((a * b) * c == a * (b * c), at("* associative"));
    rec.check(a * b == b * a, at("* commutative"));
    rec.check(a * one == a, at("1 neutral"));
    if (!a.is_zero()) rec.check(a * a.reciprocal() == one, at("multiplicative inverse"));
    rec.check(a * (b + c) == a * b + a * c, at("distributive"));
    int lt = a < b, eq = a == b, gt = a > b;
    rec.check(lt + eq + gt == 1, at("trichotomy"));
    if (a <= b && b <= c) rec.check(a <= c, at("transitive"));
    if (a < b) rec.check(a + c < b + c, at("+ monotone"));
    if (zero < a && zero < b) rec.check(zero < a * b, at("* positive"));
  }
  return rec.done();
}

SuiteResult st_homomorphism(std::size_t samples, std::uint64_t seed) {
  Recorder rec("stHomomorphism");
  std::mt19937_64 rng(seed);
  std::size_t tested = 0;
  while (tested < samples) {
    HyperRational a = random_hyper(rng), b = random_hyper(rng);
    if (classify(a).kind == Magnitude::Infinite || classify(b).kind == Magnitude::Infinite) continue;
    ++tested;
    Rational sa = standard_part(a), sb = standard_part(b);
    auto at = [&](const char* law) { return [&, law] { return std::string(law) + " at " + a.to_string() + ", " + b.to_string(); }; };
    rec.check(standard_part(a + b) == sa + sb, at("st(a+b)"));
    rec.check(standard_part(a * b) == sa * sb, at("st(ab)"));
    if (a <= b) rec.check(sa <= sb, at("order"));
  }
  return rec.done();
}

SuiteResult cross_tier(std::size_t samples, std::uint64_t seed) {
  Recorder rec("crossTier");
  std::mt19937_64 rng(seed);
  filters::UltrafilterOracle fresh;
  filters::UltrafilterOracle committed(filters::Policy::AutoLeastResidue);
  committed.commit(2, 1);
  committed.commit(3, 2);
  std::vector<Rational> standard{-3, -1, 0, Rational(1, 7), 1, 2, 1000};
  for (std::size_t i = 0; i < samples; ++i) {
    HyperRational x = random_hyper(rng, 1), y = random_hyper(rng, 1);
    for (auto* o : {&fresh, &committed})
      rec.guarded([&] { rec.check(seq::cross_tier_check(x, standard, y, *o), [&] { return x.to_string() + " vs " + y.to_string(); }); },
                  x.to_string());
  }
  return rec.done();
}

SuiteResult filter_round_trips(std::size_t samples, std::uint64_t seed) {
  using namespace filters;
  Recorder rec("filters");
  for (std::size_t n = 1; n <= 4; ++n) {
    GroundSet g = GroundSet::of_size(n);
    for (Subset z = 1; z <= g.full(); ++z) {
      auto at = [n, z](const char* what) { return [=] { return std::string(what) + " n=" + std::to_string(n) + " base=" + std::to_string(z); }; };
      // the ideal of functions vanishing on z, generated by point indicators off z
      std::vector<GroundFunction> gens;
      for (std::size_t i = 0; i < n; ++i)
        if (!(z >> i & 1)) {
          GroundFunction e(n, 0);
          e[i] = 1;
          gens.push_back(e);
        }
      if (gens.empty()) gens.push_back(GroundFunction(n, 0));
      FilterDesc f = filter_of_ideal_gens(g, gens);
      rec.check(f == FilterDesc(Principal{z}), at("F of I"));
      for (Subset zs = 0; zs <= g.full(); ++zs) {
        GroundFunction s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = (zs >> i & 1) ? Rational(0) : Rational(static_cast<long>(i + 1));
        rec.check(ideal_membership(s, f) == ((z & ~zs) == 0), at("I of F"));
        rec.check(co_filter_contains(co_filter_of(f), zs, g) == filter_contains(f, g.full() & ~zs), at("co-filter"));
      }
      rec.check(filter_of_co_filter(co_filter_of(f)) == f, at("co-filter round trip"));
      if (is_ultrafilter(f, g)) rec.check(ultrafilter_of(measure_of(f, g)) == f, at("measure round trip"));
    }
  }
  std::mt19937_64 rng(seed);
  auto random_epset = [&] {
    static const std::uint64_t mods[] = {1, 2, 3, 4, 6, 8, 12};
    std::uint64_t k = mods[rng() % 7];
    std::vector<std::uint64_t> res;
    for (std::uint64_t r = 0; r < k; ++r)
      if (rng() % 2) res.push_back(r);
    EPSet s = EPSet::periodic(k, res);
    std::uint64_t extra = rng() % 40;
    if (s.pattern_contains(extra))
      s.removed.push_back(extra);
    else
      s.added.push_back(extra);
    return s;
  };
  UltrafilterOracle o(Policy::AutoLeastResidue);
  for (std::size_t i = 0; i < samples; ++i) {
    EPSet a = random_epset(), b = random_epset();
    rec.check(dichotomy_check(o, a), [] { return std::string("dichotomy"); });
    rec.check(o.contains(a | b) == (o.contains(a) || o.contains(b)), [] { return std::string("union"); });
  }
  return rec.done();
}

SuiteResult los_exhaustive() {
  auto t0 = std::chrono::steady_clock::now();
  auto rep = super::los_exhaustive(super::LosConfig{});
  return from_report("losExhaustive", rep, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

SuiteResult mono_suite() {
  auto t0 = std::chrono::steady_clock::now();
  super::MonoConfig cfg;
  cfg.strict = false;
  auto rep = super::monomorphism_suite(cfg);
  return from_report("monoSuite", rep, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

SuiteResult transfer_verifier() {
  using namespace simple;
  Recorder rec("transfer");
  FiniteSystem s({"0", "1"});
  s.add_relation_labels("P", 1, {{"1"}});
  s.add_relation_labels("R", 2, {{"0", "1"}, {"1", "1"}});
  s.add_relation("E", 1, {});
  s.add_function_labels("f", 1, {{{"0"}, "1"}});
  s.add_function_labels("u", 1, {{{"0"}, "0"}, {{"1"}, "0"}});
  s.add_function_labels("plus", 2, {{{"0", "0"}, "0"}, {{"0", "1"}, "1"}, {{"1", "0"}, "1"}});
  auto sentences = enumerate_sentences(s, 50);
  rec.check(sentences.size() == 50, [] { return std::string("fewer than 50 sentences"); });
  for (filters::Subset b : {1u, 2u}) {
    rec.guarded(
        [&] {
          TransferReport r = verify_transfer_theorem(s, 2, filters::Principal{b}, sentences);
          rec.add_passed(r.sentences);
          rec.check(r.sentences == 50 && r.true_in_star >= r.true_in_standard, [] { return std::string("sentence counts"); });
          for (const auto& [name, cases] : r.checks) rec.check(cases > 0, [n = name] { return n + " ran no cases"; });
        },
        "principal ultrafilter at " + std::to_string(b));
  }
  return rec.done();
}

SuiteResult saturation(unsigned depth) {
  using namespace seq;
  Recorder rec("saturation");
  UltrafilterOracle o;
  Chain chain;
  chain.levels.push_back(InternalSetDesc::uniform({RatFunc(0), RatFunc(1), true, true}));
  ChainRule rule;
  rule.lo = BiRatFunc{MPoly(2), MPoly::constant(2, 1)};
  rule.hi = BiRatFunc{MPoly::constant(2, 1), MPoly::variable(2, 0)};  // 1/n
  rule.lo_open = rule.hi_open = true;
  chain.rule = rule;
  rec.guarded(
      [&] {
        SequenceReal s = saturation_witness(chain, o, depth);
        for (std::uint64_t n = 0; n <= depth; ++n)
          rec.check(internal_membership(chain.level(n), s, o), [n] { return "not in level " + std::to_string(n); });
        rec.check(seq_compare(s, embed_rational(0), o) == Order::Greater, [] { return std::string("witness not positive"); });
        for (long k = 1; k <= 1000; k *= 10)
          rec.check(seq_compare(s, embed_rational(Rational(1, k)), o) == Order::Less, [k] { return "witness >= 1/" + std::to_string(k); });
      },
      "saturation witness");
  return rec.done();
}

namespace {

std::optional<Rational> classical_limit(const seq::SequenceReal& s) {
  std::optional<Rational> l;
  for (const auto& p : s.pieces) {
    int dp = p.num().degree(), dq = p.den().degree();
    std::optional<Rational> c;
    if (p.num().is_zero() || dp < dq)
      c = Rational(0);
    else if (dp == dq)
      c = p.num().lc() / p.den().lc();
    if (!c || (l && *l != *c)) return std::nullopt;
    l = c;
  }
  return l;
}

seq::SequenceReal classes(std::vector<seq::RatFunc> pieces) {
  seq::SequenceReal s;
  s.modulus = pieces.size();
  s.pieces = std::move(pieces);
  return s;
}

seq::RatFunc random_ratfunc(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(0, 3), coef(-4, 4), pos(1, 3);
  std::vector<Rational> num(static_cast<std::size_t>(deg(rng)) + 1), den(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : num) x = Rational(coef(rng));
  // positive coefficients keep the denominator free of roots at n >= 0
  for (auto& x : den) x = Rational(pos(rng));
  return seq::RatFunc(Poly(num), Poly(den));
}

}  // namespace

SuiteResult calculus(std::size_t samples, std::uint64_t seed) {
  using namespace calc;
  Recorder rec("calculus");
  std::mt19937_64 rng(seed);
  std::vector<SequenceReal> all;
  for (std::size_t t = 0; t < samples; ++t) {
    std::size_t k = 1 + rng() % 3;
    std::vector<RatFunc> pieces;
    for (std::size_t r = 0; r < k; ++r) pieces.push_back(random_ratfunc(rng));
    if (t % 3 == 0) pieces.assign(k, pieces[0]);
    all.push_back(classes(pieces));
    rec.check(limit_via_monad(all.back()) == classical_limit(all.back()), [&] { return "limit of " + all.back().to_string(); });
  }
  RatFunc n_over = RatFunc(Poly(std::vector<Rational>{0, 1}), Poly(std::vector<Rational>{1, 1}));
  auto alt = classes({n_over, -n_over});
  rec.check(limit_points(alt).points == std::vector<Rational>{-1, 1}, [] { return std::string("limit points of (-1)^n n/(n+1)"); });
  rec.check(!limit_via_monad(alt), [] { return std::string("(-1)^n n/(n+1) has no limit"); });
  all.push_back(alt);
  all.push_back(SequenceReal::periodic({0, Rational(1, 2), 1}));
  all.push_back(SequenceReal::of(RatFunc::n()));
  for (const auto& s : all) {
    if (auto l = limit_via_monad(s)) {
      rec.check(is_cauchy(s), [&] { return "limit but not Cauchy: " + s.to_string(); });
      rec.check(limit_points(s).points == std::vector<Rational>{*l}, [&] { return "limit points differ: " + s.to_string(); });
    }
    if (is_cauchy(s)) rec.check(is_bounded(s), [&] { return "Cauchy but unbounded: " + s.to_string(); });
  }
  return rec.done();
}

SuiteResult topology(std::size_t samples, std::uint64_t seed) {
  using namespace calc;
  Recorder rec("topology");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, 3), pt(-5, 5), coin(0, 1), side(0, 9);
  for (std::size_t t = 0; t < samples; ++t) {
    SetDesc a;
    std::vector<Rational> ends;
    for (int i = 0, k = count(rng); i < k; ++i) {
      int x = pt(rng), y = pt(rng);
      if (x > y) std::swap(x, y);
      RInterval r{Rational(x), Rational(y), coin(rng) == 1, coin(rng) == 1};
      if (side(rng) == 0) r.lo.reset();
      if (side(rng) == 0) r.hi.reset();
      if (r.lo) ends.push_back(*r.lo);
      if (r.hi) ends.push_back(*r.hi);
      a.push_back(r);
    }
    // integer endpoints: membership is constant on each cell, sampled at p +- 1/4
    bool open = true, closed = true;
    for (const auto& p : ends) {
      bool in = seq::contains(a, p), l = seq::contains(a, p - Rational(1, 4)), r = seq::contains(a, p + Rational(1, 4));
      if (in && (!l || !r)) open = false;
      if (!in && (l || r)) closed = false;
    }
    bool bounded = !seq::contains(a, 100) && !seq::contains(a, -100);
    auto got = topo_check(a);
    rec.check(got.open == open && got.closed == closed && got.compact == (closed && bounded),
              [t] { return "set #" + std::to_string(t); });
  }
  auto unit = topo_check({RInterval::open(0, 1)});
  bool witnessed = std::any_of(unit.trace.begin(), unit.trace.end(), [](const TopoWitness& w) {
    return w.criterion == "closed" && star_contains({RInterval::open(0, 1)}, w.witness) &&
           !seq::contains({RInterval::open(0, 1)}, standard_part(w.witness));
  });
  rec.check(witnessed, [] { return std::string("(0,1) trace lacks s in *A with st(s) outside A"); });
  return rec.done();
}

SuiteResult hyperfinite_sums() {
  using namespace calc;
  Recorder rec("sums");
  const HyperRational w = HyperRational::omega();
  RatFunc term(Poly(1), Poly(std::vector<Rational>{0, 1, 1})), g(Poly(1), Poly(std::vector<Rational>{0, 1}));
  rec.guarded(
      [&] {
        HyperRational s = hyperfinite_sum(TelescopingSum{term, g}, w);
        rec.check(s == HyperRational(1) - HyperRational(1) / (w + HyperRational(1)), [&] { return "telescoping sum " + s.to_string(); });
        rec.check(standard_part(s) == Rational(1), [] { return std::string("st of telescoping sum"); });
        HyperRational sq = hyperfinite_sum(PolySum{Poly::monomial(1, 2)}, w);
        rec.check(sq == w * (w + HyperRational(1)) * (w * HyperRational(2) + HyperRational(1)) / HyperRational(6),
                  [] { return std::string("sum of squares"); });
      },
      "infinite sums");
  for (unsigned deg = 0; deg <= 6; ++deg) {
    PolySum p{Poly::monomial(1, deg) + Poly(std::vector<Rational>{Rational(1, 2), -1})};
    for (long u = 0; u <= 20; ++u)
      rec.check(hyperfinite_sum(p, u) == HyperRational(direct_sum(p, u)),
                [=] { return "Faulhaber degree " + std::to_string(deg) + " upper " + std::to_string(u); });
  }
  for (long u = 0; u <= 20; ++u)
    rec.check(hyperfinite_sum(TelescopingSum{term, g}, u) == HyperRational(direct_sum(TelescopingSum{term, g}, u)),
              [u] { return "telescoping upper " + std::to_string(u); });
  TelescopingProduct prod{RatFunc(Poly(std::vector<Rational>{0, 1}), Poly(std::vector<Rational>{1, 1})), g};
  rec.check(hyperfinite_product(prod, w) == HyperRational(1) / (w + HyperRational(1)), [] { return std::string("product"); });
  for (long u = 0; u <= 20; ++u)
    rec.check(hyperfinite_product(prod, u) == HyperRational(direct_product(prod, u)), [u] { return "product upper " + std::to_string(u); });
  return rec.done();
}

SuiteResult loeb_golden(std::size_t samples, std::uint64_t seed) {
  using namespace loeb;
  Recorder rec("loebGolden");
  for (std::size_t d = 0; d <= 6; ++d)
    rec.check(standardize(SymFunc(Poly::monomial(1, d))) == Rational(1, static_cast<long>(d + 1)),
              [d] { return "standardize x^" + std::to_string(d); });
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < samples; ++t) {
    long den = 2 + static_cast<long>(rng() % 11);
    std::size_t k = 1 + rng() % 4;
    std::vector<Rational> pts;
    for (long i = 0; i <= den; ++i) pts.emplace_back(Rational(i, den));
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(std::min(2 * k, pts.size() - pts.size() % 2));
    std::sort(pts.begin(), pts.end());
    IntervalUnion a;
    Rational length;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      a.push_back(RInterval{pts[i], pts[i + 1], rng() % 2 == 0, rng() % 2 == 0});
      length += pts[i + 1] - pts[i];
    }
    SymFunc chi = SymFunc::indicator(a);
    rec.check(loeb_measure(a) == length, [t] { return "measure of union #" + std::to_string(t); });
    // the same standard part on grids q*w and q*w^2
    Grid g1 = Grid::for_function(chi, 1), g2 = Grid::for_function(chi, 2);
    rec.check(standard_part(internal_integral(g1, chi)) == standard_part(internal_integral(g2, chi)),
              [t] { return "grid invariance #" + std::to_string(t); });
  }
  rec.guarded([&] { rec.check(geometric_demo(8).ok(), [] { return std::string("geometric MCT demo"); }); }, "MCT demo");
  return rec.done();
}

SuiteResult overflow() {
  using namespace calc;
  Recorder rec("overflow");
  const HyperRational w = HyperRational::omega();
  std::vector<HInterval> a{HInterval{HyperRational(0), w, false, false}};
  rec.guarded(
      [&] {
        auto r = overflow_witness(a, PermanenceMode::Overflow);
        rec.check(r.witness && *r.witness == w, [] { return std::string("[0,w] witness is not w"); });
        if (r.witness) {
          rec.check(r.witness->integer_certified(), [] { return std::string("witness not certified"); });
          rec.check(classify(*r.witness).kind == Magnitude::Infinite, [] { return std::string("witness not infinite"); });
          rec.check(a[0].contains(*r.witness), [] { return std::string("witness not in A"); });
        }
        std::vector<HInterval> root{HInterval{HyperRational(0), HyperRational::omega_pow(Rational(1, 2)), false, false}};
        rec.check(!overflow_witness(root, PermanenceMode::Overflow).witness, [] { return std::string("[0,w^(1/2)] gave a witness"); });
      },
      "overflow");
  return rec.done();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"fieldAxioms", "stHomomorphism", "crossTier", "filters", "losExhaustive",
                                              "monoSuite", "transfer", "saturation", "calculus", "topology",
                                              "sums", "loebGolden", "overflow"};
  return names;
}

SuiteResult run_suite(std::string_view name, std::size_t n) {
  auto pick = [n](std::size_t d) { return n ? n : d; };
  if (name == "fieldAxioms") return field_axioms(pick(10000));
  if (name == "stHomomorphism") return st_homomorphism(pick(1000));
  if (name == "crossTier") return cross_tier(pick(1000));
  if (name == "filters") return filter_round_trips(pick(10000));
  if (name == "losExhaustive") return los_exhaustive();
  if (name == "monoSuite") return mono_suite();
  if (name == "transfer") return transfer_verifier();
  if (name == "saturation") return saturation(static_cast<unsigned>(pick(50)));
  if (name == "calculus") return calculus(pick(50));
  if (name == "topology") return topology(pick(100));
  if (name == "sums") return hyperfinite_sums();
  if (name == "loebGolden") return loeb_golden(pick(100));
  if (name == "overflow") return overflow();
  fail(ErrorKind::UnknownSymbol, "unknown suite " + std::string(name));
}

}  // namespace nsa::suites
