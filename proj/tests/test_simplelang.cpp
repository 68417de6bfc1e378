#include <gtest/gtest.h>

#include <random>

#include "nsa/simplelang.hpp"

using namespace nsa;
using namespace nsa::simple;

namespace {

std::vector<Rational> rats(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (const char* x : xs) v.push_back(Rational::parse(x));
  return v;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::InvalidArgument;
}

const char* kComm = "(forall x)(forall y)[ R<x> & R<y> -> Eq<add(x,y),add(y,x)> ]";

FiniteSystem table_system(const std::vector<std::vector<int>>& add) {
  FiniteSystem s({"a", "b", "c"});
  const char* names[] = {"a", "b", "c"};
  s.add_relation_labels("R", 1, {{"a"}, {"b"}, {"c"}});
  s.add_relation_labels("Eq", 2, {{"a", "a"}, {"b", "b"}, {"c", "c"}});
  std::vector<std::pair<std::vector<std::string>, std::string>> g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.push_back({{names[i], names[j]}, names[add[i][j]]});
  s.add_function_labels("add", 2, g);
  return s;
}

// ---- brute-force reference evaluator, written directly against the tables

using Env = std::map<std::string, std::size_t>;

std::optional<std::size_t> ref_term(const STerm& t, const FiniteSystem& s, const Env& env) {
  if (t.kind == STerm::Kind::Var) return env.at(t.name);
  if (t.kind == STerm::Kind::Const) return s.constants().at(t.name);
  std::vector<std::size_t> args;
  for (const auto& a : t.args) {
    auto v = ref_term(a, s, env);
    if (!v) return std::nullopt;
    args.push_back(*v);
  }
  const auto& g = s.functions().at(t.name).graph;
  auto it = g.find(args);
  if (it == g.end()) return std::nullopt;
  return it->second;
}

// 0 not interpretable, 1 true, 2 false
int ref_app(const RelApp& a, const FiniteSystem& s, const Env& env) {
  std::vector<std::size_t> args;
  for (const auto& t : a.args) {
    auto v = ref_term(t, s, env);
    if (!v) return 0;
    args.push_back(*v);
  }
  return s.relations().at(a.rel).tuples.count(args) ? 1 : 2;
}

bool ref_compound(const Compound& c, const FiniteSystem& s, Env& env, std::size_t depth) {
  if (depth == c.vars.size()) {
    for (const auto& p : c.premises)
      if (ref_app(p, s, env) != 1) return true;
    for (const auto& q : c.conclusions)
      if (ref_app(q, s, env) != 1) return false;
    return true;
  }
  for (std::size_t e = 0; e < s.size(); ++e) {
    env[c.vars[depth]] = e;
    if (!ref_compound(c, s, env, depth + 1)) return false;
  }
  return true;
}

Verdict reference(const SSentence& phi, const FiniteSystem& s) {
  if (const auto* a = std::get_if<Atomic>(&phi)) {
    int r = ref_app(a->app, s, {});
    return r == 0 ? Verdict::NotInterpretable : r == 1 ? Verdict::True : Verdict::False;
  }
  Env env;
  return ref_compound(std::get<Compound>(phi), s, env, 0) ? Verdict::True : Verdict::False;
}

FiniteSystem random_system(std::mt19937_64& rng) {
  std::size_t n = 2 + rng() % 2;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  FiniteSystem s(labels);
  std::set<std::vector<std::size_t>> p, r;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 2) p.insert({i});
    for (std::size_t j = 0; j < n; ++j)
      if (rng() % 2) r.insert({i, j});
  }
  s.add_relation("P", 1, p);
  s.add_relation("R", 2, r);
  std::map<std::vector<std::size_t>, std::size_t> f, g;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 3) f[{i}] = rng() % n;
    for (std::size_t j = 0; j < n; ++j)
      if (rng() % 3) g[{i, j}] = rng() % n;
  }
  s.add_function("f", 1, f);
  s.add_function("g", 2, g);
  return s;
}

STerm random_term(std::mt19937_64& rng, int depth, bool vars) {
  int choice = static_cast<int>(rng() % (depth > 0 ? 5 : 3));
  switch (choice) {
    case 0: return STerm::constant("a");
    case 1: return vars ? STerm::var("x") : STerm::constant("b");
    case 2: return vars ? STerm::var("y") : STerm::constant("a");
    case 3: return STerm::app("f", {random_term(rng, depth - 1, vars)});
    default: return STerm::app("g", {random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars)});
  }
}

RelApp random_app(std::mt19937_64& rng, bool vars) {
  if (rng() % 2) return {"P", {random_term(rng, 2, vars)}};
  return {"R", {random_term(rng, 2, vars), random_term(rng, 2, vars)}};
}

SSentence random_sentence(std::mt19937_64& rng) {
  if (rng() % 4 == 0) return Atomic{random_app(rng, false)};
  Compound c{{"x", "y"}, {}, {}};
  for (std::size_t i = 0, k = 1 + rng() % 2; i < k; ++i) c.premises.push_back(random_app(rng, true));
  for (std::size_t i = 0, k = 1 + rng() % 2; i < k; ++i) c.conclusions.push_back(random_app(rng, true));
  return c;
}

}  // namespace

TEST(SimpleParse, CommutativitySentence) {
  SSentence s = parse_sentence(kComm);
  const auto& c = std::get<Compound>(s);
  EXPECT_EQ(c.vars, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(c.premises.size(), 2u);
  EXPECT_EQ(c.premises[0].args[0].kind, STerm::Kind::Var);
  const auto& concl = c.conclusions.at(0);
  EXPECT_EQ(concl.rel, "Eq");
  EXPECT_EQ(render(concl.args[0]), "add(x,y)");
  EXPECT_EQ(parse_sentence(render(s)), s);
}

TEST(SimpleParse, AtomicAndErrors) {
  SSentence s = parse_sentence("Leq<1,2>");
  ASSERT_TRUE(std::holds_alternative<Atomic>(s));
  EXPECT_EQ(std::get<Atomic>(s).app.args[1].kind, STerm::Kind::Const);
  EXPECT_EQ(kind_of([] { parse_sentence("(forall x)[ P<x> -> "); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_sentence("P<1> extra"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_sentence("(forall x)[ -> P<x> ]"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_sentence("(forall x)(forall x)[ P<x> -> P<x> ]"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_sentence("(forall x)[ P<x> -> P<x,x> ]"); }), ErrorKind::ArityError);
}

TEST(SimpleParse, RejectsOtherConnectivesWithSkolemHint) {
  for (const char* text : {"(exists x)[ P<x> -> Q<x> ]", "(forall x)[ P<x> | Q<x> -> Q<x> ]",
                           "(forall x)[ ~P<x> -> Q<x> ]", "(∃x)[ P<x> -> Q<x> ]", "(forall x)[ P<x> ∨ Q<x> -> Q<x> ]",
                           "(forall x)[ ¬P<x> -> Q<x> ]"}) {
    try {
      parse_sentence(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParseError) << text;
      EXPECT_NE(std::string(e.what()).find("skolemize"), std::string::npos) << e.what();
    }
  }
}

TEST(SimpleParse, SignatureChecks) {
  FiniteSystem s = table_system({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  Signature sig = s.signature();
  EXPECT_NO_THROW(parse_sentence(kComm, &sig));
  EXPECT_EQ(kind_of([&] { parse_sentence("(forall x)[ R<x> -> Eq<add(x),x> ]", &sig); }), ErrorKind::ArityError);
  EXPECT_EQ(kind_of([&] { parse_sentence("(forall x)[ Q<x> -> R<x> ]", &sig); }), ErrorKind::UnknownSymbol);
  EXPECT_EQ(kind_of([&] { parse_sentence("R<z>", &sig); }), ErrorKind::UnknownSymbol);
}

TEST(SimpleParse, InfixAndUnicodeForms) {
  SSentence s = parse_sentence("(forall x)[ (sqrt(x) > −1) -> (sqrt(x) ≥ 0) ]");
  const auto& c = std::get<Compound>(s);
  EXPECT_EQ(render(s), "(forall x)[ Gt<sqrt(x),-1> -> Geq<sqrt(x),0> ]");
  EXPECT_EQ(c.premises[0].args[1].name, "-1");
  EXPECT_EQ(render(parse_sentence("(forall x)[ R₊<x> ∧ (x != 0) → Leq<x, mul(sigma(x),1)> ]")),
            "(forall x)[ R₊<x> & Neq<x,0> -> Leq<x,mul(sigma(x),1)> ]");
}

TEST(SimpleInterpret, TermsInNumericSystem) {
  auto vals = rats({"-1", "0", "1", "2", "4"});
  FiniteSystem s = FiniteSystem::numeric(vals);
  auto sq = interpret_term(STerm::app("sqrt", {STerm::constant("4")}), s);
  ASSERT_TRUE(sq);
  EXPECT_EQ(s.labels()[*sq], "2");
  EXPECT_FALSE(interpret_term(STerm::app("sqrt", {STerm::constant("-1")}), s));
  EXPECT_FALSE(interpret_term(STerm::app("sqrt", {STerm::constant("2")}), s));
  EXPECT_EQ(s.labels()[*interpret_term(STerm::constant("0"), s)], "0");
  // nested: sqrt(sqrt(4)) is outside the carrier's square roots
  EXPECT_FALSE(interpret_term(STerm::app("sqrt", {STerm::app("sqrt", {STerm::constant("4")})}), s));
}

TEST(SimpleInterpret, HyperTerms) {
  HyperSystem h = HyperSystem::standard();
  EXPECT_EQ(*interpret_term(STerm::app("*sqrt", {STerm::constant("4")}), h), HyperRational(2));
  EXPECT_FALSE(interpret_term(STerm::app("*sqrt", {STerm::constant("-1")}), h));
  EXPECT_FALSE(interpret_term(STerm::app("*sqrt", {STerm::constant("2")}), h));
  EXPECT_EQ(*hyper_sqrt(parse_hyper("w^2 + 2*w + 1")), parse_hyper("w + 1"));
  EXPECT_EQ(*hyper_sqrt(parse_hyper("eps")), parse_hyper("w^(-1/2)"));
  EXPECT_EQ(*hyper_sqrt(parse_hyper("(w^2 - 2*w + 1)/(4*w^2)")), parse_hyper("(w - 1)/(2*w)"));
  EXPECT_FALSE(hyper_sqrt(parse_hyper("w^2 + 1")));
  EXPECT_FALSE(hyper_sqrt(parse_hyper("-w")));
}

TEST(SimpleEvaluate, IndirectRangeThroughUninterpretablePremises) {
  auto vals = rats({"-4", "-1", "0", "1", "2", "4"});
  FiniteSystem s = FiniteSystem::numeric(vals);
  EXPECT_EQ(evaluate(parse_sentence("(forall x)[ (sqrt(x) > −1) -> (sqrt(x) ≥ 0) ]"), s), Verdict::True);
  // without the premise filter a negative argument is a counterexample
  EXPECT_EQ(evaluate(parse_sentence("(forall x)[ (x = x) -> (sqrt(x) ≥ 0) ]"), s), Verdict::False);
  EXPECT_EQ(evaluate(parse_sentence("Leq<1,2>"), s), Verdict::True);
  EXPECT_EQ(evaluate(parse_sentence("Leq<2,1>"), s), Verdict::False);
  EXPECT_EQ(evaluate(parse_sentence("Leq<sqrt(-1),1>"), s), Verdict::NotInterpretable);
}

TEST(SimpleEvaluate, CommutativityTables) {
  SSentence phi = parse_sentence(kComm);
  EXPECT_EQ(evaluate(phi, table_system({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}})), Verdict::True);
  FiniteSystem bad = table_system({{0, 1, 2}, {2, 2, 0}, {2, 0, 1}});
  Evaluation e = evaluate_detailed(phi, bad);
  EXPECT_EQ(e.verdict, Verdict::False);
  ASSERT_EQ(e.counterexample.size(), 2u);
  EXPECT_EQ(e.counterexample[0], (std::pair<std::string, std::string>{"x", "b"}));
  EXPECT_EQ(e.counterexample[1], (std::pair<std::string, std::string>{"y", "a"}));
}

TEST(SimpleEvaluate, AgreesWithBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 3000; ++it) {
    FiniteSystem s = random_system(rng);
    SSentence phi = random_sentence(rng);
    ASSERT_EQ(evaluate(phi, s), reference(phi, s)) << render(phi);
  }
}

TEST(SimpleEvaluate, AddingPremisesNeverFalsifies) {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 2000; ++it) {
    FiniteSystem s = random_system(rng);
    SSentence phi = random_sentence(rng);
    auto* c = std::get_if<Compound>(&phi);
    if (!c || evaluate(phi, s) != Verdict::True) continue;
    Compound more = *c;
    more.premises.push_back(random_app(rng, true));
    EXPECT_EQ(evaluate(more, s), Verdict::True) << render(more);
  }
}

TEST(SimpleEvaluate, HyperNeedsRanges) {
  HyperSystem h = HyperSystem::standard();
  SSentence phi = parse_sentence("(forall x)[ Pos<x> -> Gt<mul(x,x),0> ]");
  EXPECT_EQ(kind_of([&] { evaluate(phi, h); }), ErrorKind::InfiniteQuantifierRange);
  HyperRanges r{{"x", {parse_hyper("eps"), parse_hyper("w"), HyperRational(-3), HyperRational(0)}}};
  EXPECT_EQ(evaluate(phi, h, r), Verdict::True);
  EXPECT_EQ(evaluate(star_transfer(phi), h, r), Verdict::True);
  EXPECT_EQ(evaluate(parse_sentence("*Lt<eps,1>"), h), Verdict::True);
  EXPECT_EQ(evaluate(parse_sentence("*Lt<w,1000000>"), h), Verdict::False);
  EXPECT_EQ(evaluate(parse_sentence("*Eq<mul(eps,w),1>"), h), Verdict::True);
  EXPECT_EQ(evaluate(parse_sentence("*Eq<div(1,0),1>"), h), Verdict::NotInterpretable);
}

TEST(SimpleStar, RenamesRelationsAndFunctionsOnly) {
  SSentence phi = parse_sentence(kComm);
  SSentence st = star_transfer(phi);
  EXPECT_EQ(render(st), "(forall x)(forall y)[ *R<x> & *R<y> -> *Eq<*add(x,y),*add(y,x)> ]");
  EXPECT_EQ(star_transfer(st), st);
  EXPECT_EQ(parse_sentence(render(st)), st);
  EXPECT_EQ(render(star_transfer(parse_sentence("Leq<1,2>"))), "*Leq<1,2>");
  SSentence arch = parse_sentence("(forall x)[ R₊<x> -> Leq<x, mul(sigma(x),1)> ]");
  EXPECT_EQ(render(star_transfer(arch)), "(forall x)[ *R₊<x> -> *Leq<x,*mul(*sigma(x),1)> ]");
}

TEST(SimpleStar, PreservesShape) {
  std::mt19937_64 rng(13);
  std::function<void(const STerm&, const STerm&)> same = [&](const STerm& a, const STerm& b) {
    ASSERT_EQ(a.kind, b.kind);
    ASSERT_EQ(a.args.size(), b.args.size());
    if (a.kind == STerm::Kind::App)
      EXPECT_EQ(b.name, "*" + a.name);
    else
      EXPECT_EQ(b.name, a.name);
    for (std::size_t i = 0; i < a.args.size(); ++i) same(a.args[i], b.args[i]);
  };
  for (int it = 0; it < 500; ++it) {
    SSentence phi = random_sentence(rng);
    SSentence st = star_transfer(phi);
    EXPECT_EQ(phi.index(), st.index());
    if (auto* c = std::get_if<Compound>(&phi)) {
      const auto& d = std::get<Compound>(st);
      EXPECT_EQ(c->vars, d.vars);
      ASSERT_EQ(c->premises.size(), d.premises.size());
      for (std::size_t i = 0; i < c->premises.size(); ++i)
        for (std::size_t k = 0; k < c->premises[i].args.size(); ++k) same(c->premises[i].args[k], d.premises[i].args[k]);
    }
    EXPECT_EQ(parse_sentence(render(st)), st);
  }
}

TEST(SimpleSkolem, InversionWitness) {
  auto vals = rats({"-2", "-1", "-1/2", "1/2", "1", "2"});
  FiniteSystem s = FiniteSystem::numeric(vals);
  SkolemSpec spec = parse_skolem_spec("(forall x)(exists y)[ NonZero<x> -> Eq<mul(x,y),1> ]");
  SSentence phi = skolemize(spec, "inv", s);
  EXPECT_EQ(render(phi), "(forall x)[ NonZero<x> -> Eq<mul(x,inv(x)),1> ]");
  EXPECT_EQ(evaluate(phi, s), Verdict::True);
}

TEST(SimpleSkolem, ArchimedeanWitness) {
  auto vals = rats({"1/2", "1", "3/2", "2", "3"});
  FiniteSystem s = FiniteSystem::numeric(vals);
  s.add_function_labels("sigma", 1, {{{"1/2"}, "1"}, {{"1"}, "1"}, {{"3/2"}, "2"}, {{"2"}, "2"}, {{"3"}, "3"}});
  SkolemSpec spec = parse_skolem_spec("(forall x)(exists n)[ Pos<x> -> Leq<x,mul(n,1)> ]");
  SSentence phi = skolemize(spec, "sigma", s);
  EXPECT_EQ(render(phi), "(forall x)[ Pos<x> -> Leq<x,mul(sigma(x),1)> ]");
  EXPECT_EQ(evaluate(phi, s), Verdict::True);
  EXPECT_EQ(render(star_transfer(phi)), "(forall x)[ *Pos<x> -> *Leq<x,*mul(*sigma(x),1)> ]");
}

TEST(SimpleSkolem, MissingWitnessEntry) {
  auto vals = rats({"1/2", "1", "2"});
  FiniteSystem s = FiniteSystem::numeric(vals);
  s.add_function_labels("sigma", 1, {{{"1"}, "1"}, {{"2"}, "2"}});
  SkolemSpec spec = parse_skolem_spec("(forall x)(exists n)[ Pos<x> -> Leq<x,n> ]");
  EXPECT_EQ(kind_of([&] { skolemize(spec, "sigma", s); }), ErrorKind::WitnessNotTotal);
  EXPECT_EQ(kind_of([&] { skolemize(spec, "tau", s); }), ErrorKind::UnknownSymbol);
  EXPECT_EQ(kind_of([] { parse_skolem_spec("(forall x)[ P<x> -> Q<x> ]"); }), ErrorKind::ParseError);
}

TEST(SimpleTransfer, UltrapowerOfPrincipalFilterHasSameSize) {
  FiniteSystem s = table_system({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  for (filters::Subset b : {1u, 2u, 4u}) {
    FiniteSystem u = ultrapower(s, 3, filters::Principal{b});
    EXPECT_EQ(u.size(), 3u);
    EXPECT_EQ(evaluate(star_transfer(parse_sentence(kComm)), u), Verdict::True);
  }
  EXPECT_EQ(kind_of([&] { ultrapower(s, 2, filters::Principal{3}); }), ErrorKind::InvalidArgument);
}

TEST(SimpleTransfer, VerifierOnTwoElementSystem) {
  FiniteSystem s({"0", "1"});
  s.add_relation_labels("P", 1, {{"1"}});
  s.add_relation_labels("R", 2, {{"0", "1"}, {"1", "1"}});
  s.add_relation("E", 1, {});
  s.add_function_labels("f", 1, {{{"0"}, "1"}});
  s.add_function_labels("u", 1, {{{"0"}, "0"}, {{"1"}, "0"}});
  s.add_function_labels("plus", 2, {{{"0", "0"}, "0"}, {{"0", "1"}, "1"}, {{"1", "0"}, "1"}});
  auto sentences = enumerate_sentences(s, 50);
  ASSERT_EQ(sentences.size(), 50u);
  std::set<std::string> distinct;
  for (const auto& phi : sentences) distinct.insert(render(phi));
  EXPECT_EQ(distinct.size(), 50u);
  for (filters::Subset b : {1u, 2u}) {
    TransferReport r = verify_transfer_theorem(s, 2, filters::Principal{b}, sentences);
    EXPECT_EQ(r.sentences, 50u);
    EXPECT_GE(r.true_in_star, r.true_in_standard);
    for (const auto& [name, cases] : r.checks) EXPECT_GT(cases, 0u) << name;
  }
  // empty relation: false on both sides
  FiniteSystem u = ultrapower(s, 2, filters::Principal{1});
  EXPECT_EQ(evaluate(parse_sentence("E<0>"), s), Verdict::False);
  EXPECT_EQ(evaluate(star_transfer(parse_sentence("E<0>")), u), Verdict::False);
  EXPECT_TRUE(u.relations().at("*E").tuples.empty());
}
