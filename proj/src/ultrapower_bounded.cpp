#include <algorithm>
#include <initializer_list>
#include <random>

#include "nsa/superstruct.hpp"

namespace nsa::super {

namespace {
using K = LFormula::Kind;

filters::Subset bit(std::size_t i) { return filters::Subset{1} << i; }
}  // namespace

BoundedUltrapower::BoundedUltrapower(const SuperUniverse& u, std::size_t index_size, filters::FilterDesc uf)
    : u_(&u), m_(index_size), uf_(std::move(uf)) {
  if (m_ == 0 || m_ > 4) fail(ErrorKind::InvalidArgument, "index set size must lie in 1..4");
  if (!filters::is_ultrafilter(uf_, filters::GroundSet::of_size(m_)))
    fail(ErrorKind::InvalidArgument, "not an ultrafilter on the index set");
}

std::size_t BoundedUltrapower::family_rank(const Family& a) const {
  if (a.size() != m_) fail(ErrorKind::InvalidArgument, "family needs one value per index");
  std::size_t r = a[0].rank();
  for (auto v : a) {
    if (!u_->over_base(v) || v.rank() > u_->depth() + 1)
      fail(ErrorKind::NotInUniverse, v.to_string() + " is not a subset of the top level");
    if (v.rank() != r) fail(ErrorKind::RankHeterogeneousFamily, "values of ranks " + std::to_string(r) + " and " +
                                                                    std::to_string(v.rank()));
  }
  return r;
}

bool BoundedUltrapower::equivalent(const Family& a, const Family& b) const {
  filters::Subset s = 0;
  for (std::size_t i = 0; i < m_; ++i)
    if (a[i] == b[i]) s |= bit(i);
  return large(s);
}

bool BoundedUltrapower::member(const Family& b, const Family& a) const {
  filters::Subset s = 0;
  for (std::size_t i = 0; i < m_; ++i)
    if (a[i].contains(b[i])) s |= bit(i);
  return large(s);
}

const std::vector<Family>& BoundedUltrapower::families_of_rank(std::size_t r) const {
  if (auto it = by_rank_.find(r); it != by_rank_.end()) return it->second;
  if (r > u_->depth()) fail(ErrorKind::SizeExplosion, "families of rank above the top level are not enumerated");
  std::vector<HEntity> vals;
  for (auto e : u_->level(r))
    if (e.rank() == r) vals.push_back(e);
  std::size_t total = 1;
  for (std::size_t i = 0; i < m_; ++i) {
    total *= vals.size();
    if (total > 4'000'000) fail(ErrorKind::SizeExplosion, "too many families of rank " + std::to_string(r));
  }
  std::vector<Family> out;
  out.reserve(total);
  std::vector<std::size_t> idx(m_, 0);
  for (std::size_t n = 0; n < total; ++n) {
    Family f(m_);
    for (std::size_t i = 0; i < m_; ++i) f[i] = vals[idx[i]];
    out.push_back(std::move(f));
    for (std::size_t i = 0; i < m_ && ++idx[i] == vals.size(); ++i) idx[i] = 0;
  }
  return by_rank_.emplace(r, std::move(out)).first->second;
}

HEntity BoundedUltrapower::mostowski(const Family& a) const {
  if (auto it = memo_.find(a); it != memo_.end()) return it->second;
  std::size_t r = family_rank(a);
  HEntity out;
  if (r == 0) {
    // the atom taken on a large set of indices
    for (auto v : a) {
      filters::Subset s = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (a[i] == v) s |= bit(i);
      if (large(s)) {
        out = v;
        break;
      }
    }
  } else {
    std::vector<HEntity> ms;
    for (std::size_t q = 0; q < r; ++q)
      for (const auto& b : families_of_rank(q))
        if (member(b, a)) ms.push_back(mostowski(b));
    out = HEntity::set(std::move(ms));
  }
  memo_.emplace(a, out);
  return out;
}

namespace {

bool los_agree(const LFormula& f, const LFormula& fstar, const std::vector<std::pair<std::string, Family>>& args,
               const BoundedUltrapower& bu) {
  Assignment lhs_env;
  for (const auto& [v, fam] : args) lhs_env[v] = bu.mostowski(fam);
  bool lhs = eval_with(fstar, lhs_env);
  filters::Subset s = 0;
  for (std::size_t i = 0; i < bu.index_size(); ++i) {
    Assignment env;
    for (const auto& [v, fam] : args) env[v] = fam[i];
    if (eval_with(f, env)) s |= bit(i);
  }
  return lhs == bu.large(s);
}

}  // namespace

bool los_check(const LFormula& f, const std::vector<std::pair<std::string, Family>>& args, const BoundedUltrapower& bu) {
  std::set<std::string> given;
  for (const auto& [v, fam] : args) {
    bu.family_rank(fam);
    given.insert(v);
  }
  for (const auto& v : free_vars(f))
    if (!given.count(v)) fail(ErrorKind::NotASentence, "no family for free variable " + v);
  LFormula fstar = star_transform(f, [&](HEntity c) { return bu.star(c); });
  return los_agree(f, fstar, args, bu);
}

// ---------------------------------------------------------------- formula enumeration

namespace {

std::vector<LFormula> atoms_over(const std::vector<LTerm>& terms, const std::string* must) {
  auto mentions = [&](const LTerm& t) { return t.kind == LTerm::Kind::Var && (!must || t.var == *must); };
  std::vector<LFormula> out;
  for (const auto& s : terms)
    for (const auto& t : terms) {
      if (!mentions(s) && !mentions(t)) continue;
      out.push_back(LFormula::in(s, t));
      out.push_back(LFormula::eq(s, t));
    }
  return out;
}

const K kBinary[] = {K::And, K::Or, K::Implies, K::Iff};

LFormula quantify(bool all, const std::string& v, const LTerm& bound, LFormula body) {
  return all ? LFormula::forall_in(v, bound, std::move(body)) : LFormula::exists_in(v, bound, std::move(body));
}

}  // namespace

std::vector<LFormula> enumerate_formulas(const std::vector<HEntity>& constants, std::size_t max_depth,
                                         std::size_t depth2_sample) {
  if (max_depth > 2) fail(ErrorKind::InvalidArgument, "formula depth is at most 2");
  std::vector<LTerm> t0{LTerm::variable("x"), LTerm::variable("y")};
  for (auto c : constants) t0.push_back(LTerm::constant(c));
  std::vector<LTerm> bounds = t0;
  std::vector<LTerm> tz = t0;
  tz.push_back(LTerm::variable("z"));
  const std::string z = "z", w = "w";

  std::vector<LFormula> d0 = atoms_over(t0, nullptr);
  std::vector<LFormula> out = d0;
  if (max_depth == 0) return out;

  std::vector<LFormula> zatoms = atoms_over(tz, &z);
  std::vector<LFormula> d1;
  for (const auto& a : d0) d1.push_back(!a);
  for (auto k : kBinary)
    for (const auto& a : d0)
      for (const auto& b : d0) d1.push_back(LFormula::binary(k, a, b));
  for (bool all : {true, false})
    for (const auto& bd : bounds)
      for (const auto& body : zatoms) d1.push_back(quantify(all, z, bd, body));
  out.insert(out.end(), d1.begin(), d1.end());
  if (max_depth == 1 || depth2_sample == 0) return out;

  // depth 2: a seeded sample over every shape
  std::vector<LTerm> tzw = tz;
  tzw.push_back(LTerm::variable("w"));
  std::vector<LFormula> watoms = atoms_over(tzw, &w);
  std::mt19937_64 rng(0x5eed);
  auto pick = [&](const auto& v) -> const auto& { return v[rng() % v.size()]; };
  std::set<std::string> seen;
  std::size_t attempts = 0;
  while (seen.size() < depth2_sample && attempts++ < depth2_sample * 20) {
    LFormula f = d0[0];
    switch (rng() % 6) {
      case 0: f = !pick(d1); break;
      case 1: f = LFormula::binary(kBinary[rng() % 4], pick(d1), pick(d0)); break;
      case 2: f = LFormula::binary(kBinary[rng() % 4], pick(d0), pick(d1)); break;
      case 3: {
        // quantifier over a connective of z-atoms
        LFormula body = rng() % 3 == 0 ? !pick(zatoms) : LFormula::binary(kBinary[rng() % 4], pick(zatoms), pick(zatoms));
        f = quantify(rng() % 2, z, pick(bounds), body);
        break;
      }
      case 4: {
        // nested quantifiers, the inner one bounded by z or a term
        LTerm inner = rng() % 2 ? LTerm::variable("z") : pick(bounds);
        f = quantify(rng() % 2, z, pick(bounds), quantify(rng() % 2, w, inner, pick(watoms)));
        break;
      }
      default: f = LFormula::binary(kBinary[rng() % 4], pick(d1), pick(d1)); break;
    }
    if (seen.insert(render(f)).second) out.push_back(f);
  }
  return out;
}

std::size_t SuiteReport::cases() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.cases;
  return n;
}

std::size_t SuiteReport::failed() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.failed;
  return n;
}

namespace {

// Deterministic mix of families per rank with values varying across indices.
std::vector<Family> sample_families(const SuperUniverse& u, std::size_t m, std::size_t count) {
  std::vector<std::vector<HEntity>> by_rank(u.depth() + 1);
  for (auto e : u.level(u.depth())) by_rank[e.rank()].push_back(e);
  std::vector<Family> out;
  for (std::size_t k = 0; out.size() < count; ++k) {
    const auto& vals = by_rank[k % by_rank.size()];
    std::size_t j = k / by_rank.size();
    Family f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = vals[(j * 7 + i * (j + 1) * 3 + j * i) % vals.size()];
    out.push_back(std::move(f));
  }
  return out;
}

void record(SuiteReport::Check& c, bool ok, const std::function<std::string()>& what) {
  ++c.cases;
  if (ok) return;
  if (c.failed++ == 0) c.first_failure = what();
}

std::string family_text(const Family& f) {
  std::string s = "(";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? ", " : "") + f[i].to_string();
  return s + ")";
}

}  // namespace

SuiteReport los_exhaustive(const LosConfig& cfg) {
  SuperUniverse u = SuperUniverse::build(cfg.atoms, cfg.depth);
  const auto& x = u.atoms();
  std::vector<HEntity> consts{x[0], HEntity::empty(), HEntity::set(x)};
  auto formulas = enumerate_formulas(consts, 2, cfg.depth2_sample);
  std::vector<std::set<std::string>> fvs;
  for (const auto& f : formulas) fvs.push_back(free_vars(f));

  SuiteReport rep;
  for (auto m : cfg.index_sizes)
    for (std::size_t p = 0; p < m; ++p) {
      BoundedUltrapower bu(u, m, filters::Principal{bit(p)});
      auto fams = sample_families(u, m, cfg.families_per_var);
      SuiteReport::Check c{"|I|=" + std::to_string(m) + " U principal at " + std::to_string(p), 0, 0, {}};
      auto star = [&](HEntity e) { return bu.star(e); };
      for (std::size_t k = 0; k < formulas.size(); ++k) {
        const auto& f = formulas[k];
        LFormula fstar = star_transform(f, star);
        std::vector<std::string> vs(fvs[k].begin(), fvs[k].end());
        std::size_t combos = 1;
        for (std::size_t i = 0; i < vs.size(); ++i) combos *= fams.size();
        for (std::size_t n = 0; n < combos; ++n) {
          std::vector<std::pair<std::string, Family>> args;
          std::size_t rest = n;
          for (const auto& v : vs) {
            args.emplace_back(v, fams[rest % fams.size()]);
            rest /= fams.size();
          }
          record(c, los_agree(f, fstar, args, bu), [&] {
            std::string s = render(f);
            for (const auto& [v, fam] : args) s += ", " + v + " = " + family_text(fam);
            return s;
          });
        }
      }
      rep.checks.push_back(std::move(c));
    }
  return rep;
}

// ---------------------------------------------------------------- monomorphism suite

SuiteReport monomorphism_suite(const MonoConfig& cfg) {
  SuperUniverse u = SuperUniverse::build(cfg.atoms, cfg.depth);
  if (cfg.principal_at >= cfg.index_size) fail(ErrorKind::InvalidArgument, "principal index outside the index set");
  BoundedUltrapower bu(u, cfg.index_size, filters::Principal{bit(cfg.principal_at)});
  auto star = [&](HEntity e) { return bu.star(e); };
  const std::size_t n_top = u.depth();
  const auto& all = u.level(n_top);
  std::vector<HEntity> sets, low_sets;
  for (auto e : all)
    if (e.is_set()) {
      sets.push_back(e);
      if (e.rank() + 1 <= n_top) low_sets.push_back(e);
    }

  SuiteReport rep;
  auto check = [&](const std::string& name) -> SuiteReport::Check& {
    rep.checks.push_back({name, 0, 0, {}});
    return rep.checks.back();
  };
  auto ok = [&](SuiteReport::Check& c, bool good, const std::function<std::string()>& what) {
    record(c, good, what);
    if (!good && cfg.strict) fail(ErrorKind::AxiomViolation, c.name + ": " + what());
  };

  {
    auto& c = check("axiom: star of the empty set");
    ok(c, star(HEntity::empty()) == HEntity::empty(), [] { return std::string("{}"); });
  }
  {
    auto& c = check("axiom: atoms are fixed");
    for (auto a : u.atoms()) ok(c, star(a) == a && star(a).is_atom(), [&] { return a.to_string(); });
  }
  {
    auto& c = check("axiom: rank preserved");
    for (auto a : all) ok(c, star(a).rank() == a.rank(), [&] { return a.to_string(); });
  }
  {
    auto& c = check("axiom: members of *V_{n+1} lie in *V_n");
    for (std::size_t n = 0; n + 1 <= n_top; ++n) {
      HEntity big = star(u.level_entity(n + 1)), small = star(u.level_entity(n));
      for (auto a : big.members())
        for (auto b : a.members())
          ok(c, small.contains(b), [&] { return b.to_string() + " in " + a.to_string(); });
    }
  }
  {
    auto& c = check("axiom: transfer of bounded sentences");
    const auto& x = u.atoms();
    std::vector<HEntity> consts{x[0], HEntity::set(x)};
    std::vector<HEntity> ranges{HEntity::set(x), u.level_entity(1)};
    for (const auto& f : enumerate_formulas(consts, 1, 0)) {
      auto fv = free_vars(f);
      for (auto r1 : ranges)
        for (auto r2 : ranges)
          for (bool all_x : {true, false}) {
            LFormula s = f;
            if (fv.count("y")) s = LFormula::forall_in("y", LTerm::constant(r2), s);
            if (fv.count("x"))
              s = all_x ? LFormula::forall_in("x", LTerm::constant(r1), s)
                        : LFormula::exists_in("x", LTerm::constant(r1), s);
            ok(c, eval_with(s, {}) == eval_with(star_transform(s, star), {}), [&] { return render(s); });
          }
    }
  }
  {
    auto& c = check("finite sets");
    for (auto s : sets) {
      std::vector<HEntity> ms;
      for (auto m : s.members()) ms.push_back(star(m));
      ok(c, star(s) == HEntity::set(ms), [&] { return s.to_string(); });
    }
  }
  {
    auto& c = check("ordered pairs");
    for (auto a : all)
      for (auto b : all)
        if (std::max(a.rank(), b.rank()) + 2 <= n_top + 1)
          ok(c, star(pair(a, b)) == pair(star(a), star(b)), [&] { return pair(a, b).to_string(); });
  }
  {
    auto& c = check("union and intersection");
    for (auto s : sets)
      for (auto t : sets) {
        ok(c, star(set_union(s, t)) == set_union(star(s), star(t)), [&] { return s.to_string() + " ∪ " + t.to_string(); });
        ok(c, star(set_intersection(s, t)) == set_intersection(star(s), star(t)),
           [&] { return s.to_string() + " ∩ " + t.to_string(); });
      }
  }
  {
    auto& c = check("cartesian product");
    for (auto s : low_sets)
      for (auto t : low_sets)
        if (s.rank() + 2 <= n_top + 1 && t.rank() + 2 <= n_top + 1)
          ok(c, star(cartesian(s, t)) == cartesian(star(s), star(t)), [&] { return s.to_string() + " × " + t.to_string(); });
  }
  {
    auto& c = check("membership");
    for (auto a : all)
      for (auto b : sets) ok(c, b.contains(a) == star(b).contains(star(a)), [&] { return a.to_string() + " ∈ " + b.to_string(); });
  }
  {
    auto& c = check("equality");
    for (auto a : all)
      for (auto b : all) ok(c, (a == b) == (star(a) == star(b)), [&] { return a.to_string() + " = " + b.to_string(); });
  }
  {
    auto& c = check("inclusion");
    for (auto s : sets)
      for (auto t : sets) ok(c, is_subset(s, t) == is_subset(star(s), star(t)), [&] { return s.to_string() + " ⊆ " + t.to_string(); });
  }

  // relations between sets whose products still fit under the top level
  struct Rel {
    HEntity a1, a2, p;
  };
  std::vector<Rel> rels;
  for (auto a1 : low_sets)
    for (auto a2 : low_sets) {
      if (a1.rank() + 2 > n_top + 1 || a2.rank() + 2 > n_top + 1) continue;
      HEntity prod = cartesian(a1, a2);
      if (prod.size() > 6) continue;
      for (auto p : power_set(prod).members()) rels.push_back({a1, a2, p});
    }
  {
    auto& c = check("relations");
    for (const auto& r : rels)
      ok(c, is_subset(star(r.p), cartesian(star(r.a1), star(r.a2))), [&] { return r.p.to_string(); });
  }
  {
    auto& c = check("domain and range");
    for (const auto& r : rels) {
      ok(c, star(domain(r.p)) == domain(star(r.p)), [&] { return "dom " + r.p.to_string(); });
      ok(c, star(range(r.p)) == range(star(r.p)), [&] { return "range " + r.p.to_string(); });
    }
  }
  {
    auto& c = check("functions");
    for (const auto& r : rels) {
      if (!is_function(r.p, r.a1, r.a2)) continue;
      HEntity f = star(r.p);
      ok(c, is_function(f, star(r.a1), star(r.a2)), [&] { return r.p.to_string(); });
      for (auto x : r.a1.members())
        ok(c, apply(f, star(x)) == std::optional<HEntity>(star(*apply(r.p, x))), [&] { return r.p.to_string() + " at " + x.to_string(); });
    }
  }
  {
    auto& c = check("bijections");
    auto bijective = [](HEntity p, HEntity a, HEntity b) {
      return is_function(p, a, b) && range(p) == b && range(p).size() == a.size();
    };
    for (const auto& r : rels)
      if (is_function(r.p, r.a1, r.a2))
        ok(c, bijective(r.p, r.a1, r.a2) == bijective(star(r.p), star(r.a1), star(r.a2)), [&] { return r.p.to_string(); });
  }
  {
    auto& c = check("power sets");
    for (auto s : sets)
      if (s.rank() + 1 <= n_top + 1 && s.size() <= 8)
        ok(c, is_subset(star(power_set(s)), power_set(star(s))), [&] { return s.to_string(); });
  }
  {
    auto& c = check("star is the identity");
    for (auto a : all) ok(c, star(a) == a, [&] { return a.to_string(); });
  }
  return rep;
}

// ---------------------------------------------------------------- internal entities

std::string_view entity_kind_name(EntityKind k) {
  switch (k) {
    case EntityKind::Standard: return "standard";
    case EntityKind::InternalNotStandard: return "internal";
    case EntityKind::External: return "external";
  }
  return "?";
}

EntityKind classify_entity(HEntity b, const BoundedUltrapower& bu, const SuperUniverse& u) {
  const auto& all = u.level(u.depth());
  for (auto a : all)
    if (bu.star(a) == b) return EntityKind::Standard;
  for (auto a : all)
    if (a.is_set() && bu.star(a).contains(b)) return EntityKind::InternalNotStandard;
  return EntityKind::External;
}

HEntity internal_definition(HEntity a, const std::string& var, const LFormula& f) {
  for (const auto& v : free_vars(f))
    if (v != var) fail(ErrorKind::NotASentence, "free variable " + v + " besides " + var);
  std::vector<HEntity> out;
  for (auto x : a.members())
    if (eval_with(f, {{var, x}})) out.push_back(x);
  return HEntity::set(std::move(out));
}

bool internal_closure_check(HEntity a, HEntity b, const BoundedUltrapower& bu, const SuperUniverse& u) {
  if (classify_entity(a, bu, u) == EntityKind::External || classify_entity(b, bu, u) == EntityKind::External)
    fail(ErrorKind::PreconditionFailed, "operands must be internal");
  for (auto r : {set_union(a, b), set_intersection(a, b), set_difference(a, b)})
    if (classify_entity(r, bu, u) == EntityKind::External) return false;
  return true;
}

HyperRational least_element(std::span<const HyperRational> k) {
  if (k.empty()) fail(ErrorKind::EmptySet, "no least element of the empty set");
  for (const auto& x : k)
    if (!x.integer_certified()) fail(ErrorKind::NotCertifiedInteger, x.to_string());
  return *std::min_element(k.begin(), k.end());
}

// For finite A the finite subsets of A include A itself, so both properties reduce to A.
bool is_concurrent(HEntity p, HEntity a) {
  if (a.size() == 0) return true;
  for (auto y : range(p).members()) {
    bool every = true;
    for (auto x : a.members())
      if (!p.contains(pair(x, y))) {
        every = false;
        break;
      }
    if (every) return true;
  }
  return false;
}

bool is_exhausting(HEntity s, HEntity a) {
  for (auto b : s.members())
    if (is_subset(a, b)) return true;
  return false;
}

bool comprehension_check(HEntity a, HEntity b, HEntity f, const BoundedUltrapower& bu) {
  if (!is_function(f, a, b)) fail(ErrorKind::PreconditionFailed, "not a function from A to B");
  HEntity g = bu.star(f);
  if (!is_function(g, bu.star(a), bu.star(b))) return false;
  for (auto x : a.members())
    if (apply(g, bu.star(x)) != std::optional<HEntity>(bu.star(*apply(f, x)))) return false;
  return true;
}

bool hyperfinite_check(HEntity b, const SuperUniverse& u) {
  if (b.is_atom()) return false;
  for (auto m : b.members())
    if (!u.contains(m)) return false;
  return true;
}

}  // namespace nsa::super
