#include <algorithm>
#include <cstdint>
#include <iterator>
#include <tuple>

#include "nsa/simplelang.hpp"

namespace nsa::simple {

// ---------------------------------------------------------------- finite systems

FiniteSystem::FiniteSystem(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) fail(ErrorKind::InvalidArgument, "duplicate element '" + labels_[i] + "'");
    consts_[labels_[i]] = i;
  }
}

FiniteSystem::Elem FiniteSystem::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) fail(ErrorKind::UnknownSymbol, "element '" + label + "'");
  return it->second;
}

void FiniteSystem::add_relation(const std::string& name, std::size_t arity, std::set<std::vector<Elem>> tuples) {
  for (const auto& t : tuples) {
    if (t.size() != arity) fail(ErrorKind::ArityError, "relation '" + name + "' tuple of wrong length");
    for (auto e : t)
      if (e >= size()) fail(ErrorKind::InvalidArgument, "relation '" + name + "' mentions a non-element");
  }
  rels_[name] = {arity, std::move(tuples)};
}

void FiniteSystem::add_function(const std::string& name, std::size_t arity, std::map<std::vector<Elem>, Elem> graph) {
  for (const auto& [args, v] : graph) {
    if (args.size() != arity) fail(ErrorKind::ArityError, "function '" + name + "' argument tuple of wrong length");
    for (auto e : args)
      if (e >= size()) fail(ErrorKind::InvalidArgument, "function '" + name + "' mentions a non-element");
    if (v >= size()) fail(ErrorKind::InvalidArgument, "function '" + name + "' value is not an element");
  }
  funs_[name] = {arity, std::move(graph)};
}

void FiniteSystem::add_constant(const std::string& name, Elem e) {
  if (e >= size()) fail(ErrorKind::InvalidArgument, "constant '" + name + "' is not an element");
  consts_[name] = e;
}

void FiniteSystem::add_relation_labels(const std::string& name, std::size_t arity,
                                       const std::vector<std::vector<std::string>>& tuples) {
  std::set<std::vector<Elem>> ts;
  for (const auto& t : tuples) {
    std::vector<Elem> v;
    for (const auto& l : t) v.push_back(index_of(l));
    ts.insert(std::move(v));
  }
  add_relation(name, arity, std::move(ts));
}

void FiniteSystem::add_function_labels(const std::string& name, std::size_t arity,
                                       const std::vector<std::pair<std::vector<std::string>, std::string>>& graph) {
  std::map<std::vector<Elem>, Elem> g;
  for (const auto& [args, v] : graph) {
    std::vector<Elem> a;
    for (const auto& l : args) a.push_back(index_of(l));
    if (!g.emplace(a, index_of(v)).second) fail(ErrorKind::InvalidArgument, "function '" + name + "' is not single-valued");
  }
  add_function(name, arity, std::move(g));
}

Signature FiniteSystem::signature() const {
  Signature sig;
  for (const auto& [n, r] : rels_) sig.relations[n] = r.arity;
  for (const auto& [n, f] : funs_) sig.functions[n] = f.arity;
  for (const auto& [n, e] : consts_) sig.constants.insert(n);
  return sig;
}

std::optional<FiniteSystem::Elem> FiniteSystem::constant(const std::string& name) const {
  auto it = consts_.find(name);
  if (it == consts_.end()) return std::nullopt;
  return it->second;
}

std::optional<FiniteSystem::Elem> FiniteSystem::apply(const std::string& fn, std::span<const Elem> args) const {
  auto it = funs_.find(fn);
  if (it == funs_.end()) fail(ErrorKind::UnknownSymbol, "function '" + fn + "'");
  if (it->second.arity != args.size()) fail(ErrorKind::ArityError, "function '" + fn + "'");
  auto g = it->second.graph.find(std::vector<Elem>(args.begin(), args.end()));
  if (g == it->second.graph.end()) return std::nullopt;
  return g->second;
}

bool FiniteSystem::holds(const std::string& rel, std::span<const Elem> args) const {
  auto it = rels_.find(rel);
  if (it == rels_.end()) fail(ErrorKind::UnknownSymbol, "relation '" + rel + "'");
  if (it->second.arity != args.size()) fail(ErrorKind::ArityError, "relation '" + rel + "'");
  return it->second.tuples.count(std::vector<Elem>(args.begin(), args.end())) > 0;
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r.sign() < 0) return std::nullopt;
  Integer n = r.num(), d = r.den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Integer sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  return Rational(sn, sd);
}

}  // namespace

FiniteSystem FiniteSystem::numeric(std::span<const Rational> values) {
  std::vector<std::string> labels;
  for (const auto& v : values) labels.push_back(v.to_string());
  FiniteSystem s(labels);
  std::map<Rational, Elem> where;
  for (std::size_t i = 0; i < values.size(); ++i) where[values[i]] = i;

  auto binrel = [&](const std::string& name, auto pred) {
    std::set<std::vector<Elem>> t;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < values.size(); ++j)
        if (pred(values[i], values[j])) t.insert({i, j});
    s.add_relation(name, 2, std::move(t));
  };
  binrel("Eq", [](const Rational& a, const Rational& b) { return a == b; });
  binrel("Neq", [](const Rational& a, const Rational& b) { return a != b; });
  binrel("Lt", [](const Rational& a, const Rational& b) { return a < b; });
  binrel("Leq", [](const Rational& a, const Rational& b) { return a <= b; });
  binrel("Gt", [](const Rational& a, const Rational& b) { return a > b; });
  binrel("Geq", [](const Rational& a, const Rational& b) { return a >= b; });
  auto unrel = [&](const std::string& name, auto pred) {
    std::set<std::vector<Elem>> t;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (pred(values[i])) t.insert({i});
    s.add_relation(name, 1, std::move(t));
  };
  unrel("Pos", [](const Rational& a) { return a.sign() > 0; });
  unrel("NonZero", [](const Rational& a) { return !a.is_zero(); });

  auto unfun = [&](const std::string& name, auto f) {
    std::map<std::vector<Elem>, Elem> g;
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::optional<Rational> r = f(values[i]);
      if (!r) continue;
      auto it = where.find(*r);
      if (it != where.end()) g[{i}] = it->second;
    }
    s.add_function(name, 1, std::move(g));
  };
  unfun("neg", [](const Rational& a) -> std::optional<Rational> { return -a; });
  unfun("abs", [](const Rational& a) -> std::optional<Rational> { return a.abs(); });
  unfun("sqrt", [](const Rational& a) { return rational_sqrt(a); });
  unfun("inv", [](const Rational& a) -> std::optional<Rational> {
    if (a.is_zero()) return std::nullopt;
    return a.inverse();
  });
  auto binfun = [&](const std::string& name, auto f) {
    std::map<std::vector<Elem>, Elem> g;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < values.size(); ++j) {
        std::optional<Rational> r = f(values[i], values[j]);
        if (!r) continue;
        auto it = where.find(*r);
        if (it != where.end()) g[{i, j}] = it->second;
      }
    s.add_function(name, 2, std::move(g));
  };
  binfun("add", [](const Rational& a, const Rational& b) -> std::optional<Rational> { return a + b; });
  binfun("sub", [](const Rational& a, const Rational& b) -> std::optional<Rational> { return a - b; });
  binfun("mul", [](const Rational& a, const Rational& b) -> std::optional<Rational> { return a * b; });
  binfun("div", [](const Rational& a, const Rational& b) -> std::optional<Rational> {
    if (b.is_zero()) return std::nullopt;
    return a / b;
  });
  return s;
}

// ---------------------------------------------------------------- hyper systems

namespace {

std::optional<GenPoly> genpoly_sqrt(const GenPoly& y) {
  if (y.is_zero()) return GenPoly();
  const auto& lead = y.leading();
  auto c = rational_sqrt(lead.coef);
  if (!c) return std::nullopt;
  Rational e = lead.exp / Rational(2);
  Rational floor_exp = y.lowest().exp / Rational(2);
  GenPoly s = GenPoly::monomial(*c, e);
  Rational twice = *c * Rational(2);
  for (int guard = 0; guard < 100000; ++guard) {
    GenPoly r = y - s * s;
    if (r.is_zero()) return s;
    Rational next = r.leading().exp - e;
    if (next < floor_exp) return std::nullopt;
    s = s + GenPoly::monomial(r.leading().coef / twice, next);
  }
  return std::nullopt;
}

}  // namespace

std::optional<HyperRational> hyper_sqrt(const HyperRational& x) {
  if (x.sign() < 0) return std::nullopt;
  if (x.is_zero()) return HyperRational(0);
  // x = n/d is a square iff n*d is; then sqrt(x) = sqrt(n*d)/d
  auto s = genpoly_sqrt(x.num() * x.den());
  if (!s) return std::nullopt;
  return HyperRational::fraction(*s, x.den());
}

void HyperSystem::add_relation(const std::string& name, std::size_t arity, Pred p) { rels_[name] = {arity, std::move(p)}; }

void HyperSystem::add_function(const std::string& name, std::size_t arity, Fn f) { funs_[name] = {arity, std::move(f)}; }

void HyperSystem::add_constant(const std::string& name, Elem e) { consts_.insert_or_assign(name, std::move(e)); }

HyperSystem HyperSystem::standard() {
  HyperSystem h;
  using Args = std::span<const Elem>;
  auto both = [&](const std::string& n, std::size_t k, auto p) {
    h.add_relation(n, k, p);
    h.add_relation(star_name(n), k, p);
  };
  both("Eq", 2, [](Args a) { return a[0] == a[1]; });
  both("Neq", 2, [](Args a) { return a[0] != a[1]; });
  both("Lt", 2, [](Args a) { return a[0] < a[1]; });
  both("Leq", 2, [](Args a) { return a[0] <= a[1]; });
  both("Gt", 2, [](Args a) { return a[0] > a[1]; });
  both("Geq", 2, [](Args a) { return a[0] >= a[1]; });
  both("Pos", 1, [](Args a) { return a[0].sign() > 0; });
  both("NonZero", 1, [](Args a) { return !a[0].is_zero(); });
  auto fboth = [&](const std::string& n, std::size_t k, auto f) {
    h.add_function(n, k, f);
    h.add_function(star_name(n), k, f);
  };
  using R = std::optional<Elem>;
  fboth("add", 2, [](Args a) -> R { return a[0] + a[1]; });
  fboth("sub", 2, [](Args a) -> R { return a[0] - a[1]; });
  fboth("mul", 2, [](Args a) -> R { return a[0] * a[1]; });
  fboth("div", 2, [](Args a) -> R {
    if (a[1].is_zero()) return std::nullopt;
    return a[0] / a[1];
  });
  fboth("neg", 1, [](Args a) -> R { return -a[0]; });
  fboth("abs", 1, [](Args a) -> R { return a[0].abs(); });
  fboth("inv", 1, [](Args a) -> R {
    if (a[0].is_zero()) return std::nullopt;
    return a[0].reciprocal();
  });
  fboth("sqrt", 1, [](Args a) -> R { return hyper_sqrt(a[0]); });
  return h;
}

Signature HyperSystem::signature() const {
  Signature sig;
  for (const auto& [n, r] : rels_) sig.relations[n] = r.first;
  for (const auto& [n, f] : funs_) sig.functions[n] = f.first;
  for (const auto& [n, e] : consts_) sig.constants.insert(n);
  sig.check_constants = false;  // numerals and w / eps are always constants
  return sig;
}

std::optional<HyperRational> HyperSystem::constant(const std::string& name) const {
  auto it = consts_.find(name);
  if (it != consts_.end()) return it->second;
  try {
    return parse_hyper(name);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<HyperRational> HyperSystem::apply(const std::string& fn, std::span<const Elem> args) const {
  auto it = funs_.find(fn);
  if (it == funs_.end()) fail(ErrorKind::UnknownSymbol, "function '" + fn + "'");
  if (it->second.first != args.size()) fail(ErrorKind::ArityError, "function '" + fn + "'");
  return it->second.second(args);
}

bool HyperSystem::holds(const std::string& rel, std::span<const Elem> args) const {
  auto it = rels_.find(rel);
  if (it == rels_.end()) fail(ErrorKind::UnknownSymbol, "relation '" + rel + "'");
  if (it->second.first != args.size()) fail(ErrorKind::ArityError, "relation '" + rel + "'");
  return it->second.second(args);
}

// ---------------------------------------------------------------- ultrapower

namespace {

using Elem = FiniteSystem::Elem;

// Representatives I -> S, indexed in base |S|, and their U-classes.
struct Classes {
  std::size_t n, m;
  filters::FilterDesc u;
  std::vector<std::size_t> class_of;       // representative -> class
  std::vector<std::size_t> rep;            // class -> least representative
  std::vector<std::vector<Elem>> values;   // representative -> values

  filters::Subset where(const std::function<bool(std::size_t)>& pred) const {
    filters::Subset s = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (pred(j)) s |= filters::Subset{1} << j;
    return s;
  }
  bool large(filters::Subset s) const { return filters::filter_contains(u, s); }
  std::size_t encode(const std::vector<Elem>& v) const {
    std::size_t r = 0;
    for (std::size_t j = m; j-- > 0;) r = r * n + v[j];
    return r;
  }
};

Classes make_classes(const FiniteSystem& s, std::size_t m, const filters::FilterDesc& u) {
  if (m == 0 || m > 16) fail(ErrorKind::InvalidArgument, "index set size must be 1..16");
  if (!filters::is_ultrafilter(u, filters::GroundSet::of_size(m)))
    fail(ErrorKind::InvalidArgument, "not an ultrafilter on the index set");
  Classes c{s.size(), m, u, {}, {}, {}};
  std::size_t total = 1;
  for (std::size_t j = 0; j < m; ++j) {
    total *= s.size();
    if (total > 200000) fail(ErrorKind::SizeExplosion, "ultrapower has too many representatives");
  }
  for (std::size_t r = 0; r < total; ++r) {
    std::vector<Elem> v(m);
    std::size_t x = r;
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = x % s.size();
      x /= s.size();
    }
    c.values.push_back(std::move(v));
  }
  c.class_of.assign(total, SIZE_MAX);
  for (std::size_t r = 0; r < total; ++r) {
    if (c.class_of[r] != SIZE_MAX) continue;
    std::size_t id = c.rep.size();
    c.rep.push_back(r);
    for (std::size_t q = r; q < total; ++q) {
      if (c.class_of[q] != SIZE_MAX) continue;
      if (c.large(c.where([&](std::size_t j) { return c.values[r][j] == c.values[q][j]; }))) c.class_of[q] = id;
    }
  }
  return c;
}

template <class F>
void for_each_tuple(std::size_t n, std::size_t k, F f) {
  std::vector<std::size_t> t(k, 0);
  while (true) {
    f(t);
    std::size_t i = 0;
    while (i < k && ++t[i] == n) t[i++] = 0;
    if (i == k) return;
  }
}

std::string class_label(const FiniteSystem& s, const std::vector<Elem>& v) {
  std::string out = "[";
  for (std::size_t j = 0; j < v.size(); ++j) out += (j ? "," : "") + s.labels()[v[j]];
  return out + "]";
}

// *P holds of classes iff {j | P<x1_j, ..., xk_j>} is U-large.
bool star_holds(const Classes& c, const FiniteSystem::Relation& r, const std::vector<std::size_t>& cls) {
  return c.large(c.where([&](std::size_t j) {
    std::vector<Elem> t;
    for (auto k : cls) t.push_back(c.values[c.rep[k]][j]);
    return r.tuples.count(t) > 0;
  }));
}

std::optional<std::size_t> star_apply(const Classes& c, const FiniteSystem::Function& f, const std::vector<std::size_t>& cls) {
  std::vector<Elem> out(c.m, 0);
  filters::Subset dom = c.where([&](std::size_t j) {
    std::vector<Elem> t;
    for (auto k : cls) t.push_back(c.values[c.rep[k]][j]);
    auto it = f.graph.find(t);
    if (it == f.graph.end()) return false;
    out[j] = it->second;
    return true;
  });
  if (!c.large(dom)) return std::nullopt;
  return c.class_of[c.encode(out)];
}

FiniteSystem build_ultrapower(const FiniteSystem& s, const Classes& c) {
  std::vector<std::string> labels;
  for (auto r : c.rep) labels.push_back(class_label(s, c.values[r]));
  FiniteSystem u(labels);
  for (const auto& [name, e] : s.constants()) u.add_constant(name, c.class_of[c.encode(std::vector<Elem>(c.m, e))]);
  std::size_t k = c.rep.size();
  for (const auto& [name, r] : s.relations()) {
    std::set<std::vector<Elem>> tuples;
    for_each_tuple(k, r.arity, [&](const std::vector<std::size_t>& t) {
      if (star_holds(c, r, t)) tuples.insert(t);
    });
    u.add_relation(star_name(name), r.arity, std::move(tuples));
  }
  for (const auto& [name, f] : s.functions()) {
    std::map<std::vector<Elem>, Elem> graph;
    for_each_tuple(k, f.arity, [&](const std::vector<std::size_t>& t) {
      if (auto v = star_apply(c, f, t)) graph[t] = *v;
    });
    u.add_function(star_name(name), f.arity, std::move(graph));
  }
  return u;
}

[[noreturn]] void counterexample(const std::string& what) { fail(ErrorKind::CounterexampleFound, what); }

}  // namespace

FiniteSystem ultrapower(const FiniteSystem& s, std::size_t index_size, const filters::FilterDesc& u) {
  return build_ultrapower(s, make_classes(s, index_size, u));
}

std::vector<SSentence> enumerate_sentences(const FiniteSystem& s, std::size_t count) {
  std::vector<STerm> pool{STerm::var("x"), STerm::var("y")};
  for (const auto& [name, e] : s.constants()) pool.push_back(STerm::constant(name));
  for (const auto& [name, f] : s.functions()) {
    if (f.arity == 1) {
      pool.push_back(STerm::app(name, {STerm::var("x")}));
      pool.push_back(STerm::app(name, {STerm::var("y")}));
    } else if (f.arity == 2) {
      pool.push_back(STerm::app(name, {STerm::var("x"), STerm::var("y")}));
    }
  }
  std::vector<RelApp> atoms;
  for (const auto& [name, r] : s.relations()) {
    if (r.arity > 2) continue;
    for_each_tuple(pool.size(), r.arity, [&](const std::vector<std::size_t>& t) {
      RelApp a{name, {}};
      for (auto i : t) a.args.push_back(pool[i]);
      atoms.push_back(std::move(a));
    });
  }
  auto vars_of = [](const std::vector<RelApp>& apps) {
    bool x = false, y = false;
    std::function<void(const STerm&)> walk = [&](const STerm& t) {
      if (t.kind == STerm::Kind::Var) (t.name == "x" ? x : y) = true;
      for (const auto& a : t.args) walk(a);
    };
    for (const auto& a : apps)
      for (const auto& t : a.args) walk(t);
    std::vector<std::string> v;
    if (x) v.push_back("x");
    if (y) v.push_back("y");
    return v;
  };
  // candidates: all pairs p -> q, then p & p' -> q'' with q'' from every seventh atom
  std::size_t a = atoms.size(), stride = 7, per = (a + stride - 1) / stride;
  std::size_t pairs = a * a, total = pairs + a * (a - 1) / 2 * per;
  auto make = [&](std::size_t idx) -> std::optional<SSentence> {
    std::vector<RelApp> prem, concl;
    if (idx < pairs) {
      prem = {atoms[idx / a]};
      concl = {atoms[idx % a]};
    } else {
      std::size_t t = idx - pairs, pair = t / per, k = (t % per) * stride;
      std::size_t i = 0;
      while (pair >= a - 1 - i) pair -= a - 1 - i++;
      prem = {atoms[i], atoms[i + 1 + pair]};
      concl = {atoms[k]};
    }
    std::vector<RelApp> both = prem;
    both.insert(both.end(), concl.begin(), concl.end());
    auto v = vars_of(both);
    if (v.empty()) return std::nullopt;
    return Compound{v, std::move(prem), std::move(concl)};
  };
  // evenly spaced selection keeps the list varied and deterministic
  std::vector<SSentence> out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < count && a > 0; ++i) {
    std::size_t idx = std::max(next, i * total / count);
    while (idx < total && !make(idx)) ++idx;
    if (idx >= total) break;
    out.push_back(*make(idx));
    next = idx + 1;
  }
  return out;
}

TransferReport verify_transfer_theorem(const FiniteSystem& s, std::size_t index_size, const filters::FilterDesc& u,
                                       std::span<const SSentence> sentences) {
  // derived relations and functions whose stars the identities below are about
  FiniteSystem d = s;
  std::vector<std::tuple<std::string, std::string, std::string, char>> setops;  // derived, a, b, op
  std::size_t n = s.size();
  for (const auto& [an, a] : s.relations())
    for (const auto& [bn, b] : s.relations()) {
      if (a.arity != b.arity || an >= bn) continue;
      std::set<std::vector<Elem>> inter, uni, diff;
      std::set_intersection(a.tuples.begin(), a.tuples.end(), b.tuples.begin(), b.tuples.end(),
                            std::inserter(inter, inter.end()));
      std::set_union(a.tuples.begin(), a.tuples.end(), b.tuples.begin(), b.tuples.end(), std::inserter(uni, uni.end()));
      std::set_difference(a.tuples.begin(), a.tuples.end(), b.tuples.begin(), b.tuples.end(),
                          std::inserter(diff, diff.end()));
      for (auto [op, ts] : {std::pair{'&', inter}, std::pair{'|', uni}, std::pair{'-', diff}}) {
        std::string name = std::string("__set") + op + an + "," + bn;
        d.add_relation(name, a.arity, ts);
        setops.emplace_back(name, an, bn, op);
      }
    }
  for (const auto& [fn, f] : s.functions()) {
    std::set<std::vector<Elem>> dom;
    for (const auto& [args, v] : f.graph) dom.insert(args);
    d.add_relation("__dom" + fn, f.arity, dom);
  }
  d.add_relation("__empty", 1, {});
  // pointwise combinations: op(f(x), g(x)) and h(f(x))
  std::vector<std::tuple<std::string, std::string, std::string, std::string>> combos;  // derived, op, f, g
  for (const auto& [on, op] : s.functions())
    for (const auto& [fn, f] : s.functions())
      for (const auto& [gn, g] : s.functions()) {
        if (f.arity != 1 || g.arity != 1) continue;
        if (op.arity == 2) {
          std::map<std::vector<Elem>, Elem> graph;
          for (Elem x = 0; x < n; ++x) {
            auto fx = f.graph.find({x}), gx = g.graph.find({x});
            if (fx == f.graph.end() || gx == g.graph.end()) continue;
            auto r = op.graph.find({fx->second, gx->second});
            if (r != op.graph.end()) graph[{x}] = r->second;
          }
          std::string name = "__op" + on + "," + fn + "," + gn;
          d.add_function(name, 1, graph);
          combos.emplace_back(name, on, fn, gn);
        } else if (op.arity == 1 && fn == gn) {
          std::map<std::vector<Elem>, Elem> graph;
          for (Elem x = 0; x < n; ++x) {
            auto fx = f.graph.find({x});
            if (fx == f.graph.end()) continue;
            auto r = op.graph.find({fx->second});
            if (r != op.graph.end()) graph[{x}] = r->second;
          }
          std::string name = "__op" + on + "," + fn;
          d.add_function(name, 1, graph);
          combos.emplace_back(name, on, fn, "");
        }
      }

  Classes c = make_classes(d, index_size, u);
  FiniteSystem star = build_ultrapower(d, c);
  std::size_t k = c.rep.size();

  TransferReport rep;
  for (const auto& phi : sentences) {
    Verdict v = evaluate(phi, s);
    SSentence sphi = star_transfer(phi);
    Evaluation w = evaluate_detailed(sphi, star);
    ++rep.sentences;
    if (v == Verdict::True) ++rep.true_in_standard;
    if (w.verdict == Verdict::True) ++rep.true_in_star;
    if (v == Verdict::True && w.verdict != Verdict::True) {
      std::string at;
      for (const auto& [var, l] : w.counterexample) at += (at.empty() ? "" : ", ") + var + "=" + l;
      counterexample(render(phi) + " holds but its transfer fails at " + (at.empty() ? "(atomic)" : at));
    }
  }

  std::size_t cases = 0;
  for (const auto& [name, a, b, op] : setops) {
    const auto& ra = star.relations().at(star_name(a));
    const auto& rb = star.relations().at(star_name(b));
    const auto& rd = star.relations().at(star_name(name));
    for_each_tuple(k, ra.arity, [&](const std::vector<std::size_t>& t) {
      bool x = ra.tuples.count(t) > 0, y = rb.tuples.count(t) > 0;
      bool expect = op == '&' ? (x && y) : op == '|' ? (x || y) : (x && !y);
      if ((rd.tuples.count(t) > 0) != expect) counterexample("star of " + name + " differs from the set operation");
      ++cases;
    });
  }
  rep.checks.emplace_back("set-algebra", cases);

  // *(chi_P)(x) is the class of j -> chi_P(x_j) in {0,1}^I / U
  cases = 0;
  for (const auto& [name, r] : s.relations()) {
    const auto& sr = star.relations().at(star_name(name));
    for_each_tuple(k, r.arity, [&](const std::vector<std::size_t>& t) {
      bool chi = c.large(c.where([&](std::size_t j) {
        std::vector<Elem> v;
        for (auto cl : t) v.push_back(c.values[c.rep[cl]][j]);
        return r.tuples.count(v) > 0;
      }));
      if (chi != (sr.tuples.count(t) > 0)) counterexample("characteristic function of " + name + " does not transfer");
      ++cases;
    });
  }
  rep.checks.emplace_back("characteristic-function", cases);

  cases = 0;
  for (const auto& [fn, f] : s.functions()) {
    const auto& sf = star.functions().at(star_name(fn));
    const auto& sd = star.relations().at(star_name("__dom" + fn));
    for_each_tuple(k, f.arity, [&](const std::vector<std::size_t>& t) {
      if ((sf.graph.count(t) > 0) != (sd.tuples.count(t) > 0)) counterexample("domain of *" + fn + " differs");
      ++cases;
    });
  }
  rep.checks.emplace_back("domain", cases);

  if (!star.relations().at(star_name("__empty")).tuples.empty()) counterexample("star of the empty set is not empty");
  for (const auto& [name, r] : s.relations())
    if (r.tuples.empty() && !star.relations().at(star_name(name)).tuples.empty())
      counterexample("star of empty relation " + name + " is not empty");
  rep.checks.emplace_back("empty-set", 1);

  cases = 0;
  for (const auto& [name, on, fn, gn] : combos) {
    const auto& sh = star.functions().at(star_name(name));
    const auto& sop = star.functions().at(star_name(on));
    const auto& sf = star.functions().at(star_name(fn));
    for (std::size_t x = 0; x < k; ++x) {
      std::optional<std::size_t> lhs, rhs;
      if (auto it = sh.graph.find({x}); it != sh.graph.end()) lhs = it->second;
      auto fx = sf.graph.find({x});
      if (gn.empty()) {
        if (fx != sf.graph.end())
          if (auto r = sop.graph.find({fx->second}); r != sop.graph.end()) rhs = r->second;
      } else {
        const auto& sg = star.functions().at(star_name(gn));
        auto gx = sg.graph.find({x});
        if (fx != sf.graph.end() && gx != sg.graph.end())
          if (auto r = sop.graph.find({fx->second, gx->second}); r != sop.graph.end()) rhs = r->second;
      }
      if (lhs != rhs) counterexample("pointwise " + on + " of " + fn + (gn.empty() ? "" : "," + gn) + " does not transfer");
      ++cases;
    }
  }
  rep.checks.emplace_back("pointwise-operations", cases);
  return rep;
}

}  // namespace nsa::simple
