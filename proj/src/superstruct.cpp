#include "nsa/superstruct.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <memory>
#include <mutex>
#include <ostream>
#include <shared_mutex>

namespace nsa::super {

// ---------------------------------------------------------------- entity pool

struct IdsHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

class Pool {
 public:
  struct Node {
    bool atom = false;
    std::string label;
    std::vector<HEntity> members;
    std::size_t rank = 1;
  };

  Pool() {
    nodes_.push_back(std::make_unique<Node>());  // id 0 is the empty set
    sets_.emplace(std::vector<std::uint32_t>{}, 0);
  }

  const Node& node(std::uint32_t id) {
    std::shared_lock lock(mu_);
    return *nodes_[id];
  }

  HEntity atom(std::string_view label) {
    std::string key(label);
    {
      std::shared_lock lock(mu_);
      if (auto it = atoms_.find(key); it != atoms_.end()) return HEntity(it->second);
    }
    std::unique_lock lock(mu_);
    if (auto it = atoms_.find(key); it != atoms_.end()) return HEntity(it->second);
    auto n = std::make_unique<Node>();
    n->atom = true;
    n->label = key;
    n->rank = 0;
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(std::move(n));
    atoms_.emplace(key, id);
    return HEntity(id);
  }

  HEntity set(std::vector<HEntity> ms) {
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    std::vector<std::uint32_t> key;
    key.reserve(ms.size());
    for (auto m : ms) key.push_back(m.id());
    {
      std::shared_lock lock(mu_);
      if (auto it = sets_.find(key); it != sets_.end()) return HEntity(it->second);
    }
    std::size_t rank = 1;
    for (auto m : ms) rank = std::max(rank, node(m.id()).rank + 1);
    std::unique_lock lock(mu_);
    if (auto it = sets_.find(key); it != sets_.end()) return HEntity(it->second);
    auto n = std::make_unique<Node>();
    n->members = std::move(ms);
    n->rank = rank;
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(std::move(n));
    sets_.emplace(std::move(key), id);
    return HEntity(id);
  }

 private:
  std::shared_mutex mu_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::unordered_map<std::string, std::uint32_t> atoms_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, IdsHash> sets_;
};

namespace {
Pool& pool() {
  static Pool p;
  return p;
}
}  // namespace

HEntity HEntity::atom(std::string_view label) {
  if (label.empty()) fail(ErrorKind::InvalidArgument, "atom label must be non-empty");
  return pool().atom(label);
}
HEntity HEntity::set(std::vector<HEntity> members) { return pool().set(std::move(members)); }
bool HEntity::is_atom() const { return pool().node(id_).atom; }

const std::string& HEntity::label() const {
  const auto& n = pool().node(id_);
  if (!n.atom) fail(ErrorKind::InvalidArgument, "sets have no label");
  return n.label;
}

const std::vector<HEntity>& HEntity::members() const { return pool().node(id_).members; }

bool HEntity::contains(HEntity x) const {
  const auto& ms = members();
  return std::binary_search(ms.begin(), ms.end(), x);
}

std::size_t HEntity::rank() const { return pool().node(id_).rank; }

std::string HEntity::to_string() const {
  const auto& n = pool().node(id_);
  if (n.atom) return n.label;
  std::vector<std::pair<std::size_t, std::string>> parts;
  for (auto m : n.members) parts.emplace_back(m.rank(), m.to_string());
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i].second;
  return out + "}";
}

std::ostream& operator<<(std::ostream& os, HEntity e) { return os << e.to_string(); }

// ---------------------------------------------------------------- set calculus

HEntity set_union(HEntity a, HEntity b) {
  std::vector<HEntity> out(a.members());
  out.insert(out.end(), b.members().begin(), b.members().end());
  return HEntity::set(std::move(out));
}

HEntity set_intersection(HEntity a, HEntity b) {
  std::vector<HEntity> out;
  std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                        std::back_inserter(out));
  return HEntity::set(std::move(out));
}

HEntity set_difference(HEntity a, HEntity b) {
  std::vector<HEntity> out;
  std::set_difference(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                      std::back_inserter(out));
  return HEntity::set(std::move(out));
}

bool is_subset(HEntity a, HEntity b) {
  if (a.is_atom() || b.is_atom()) return false;
  return std::includes(b.members().begin(), b.members().end(), a.members().begin(), a.members().end());
}

HEntity power_set(HEntity a) {
  const auto& ms = a.members();
  if (ms.size() > 16) fail(ErrorKind::SizeExplosion, "power set of " + std::to_string(ms.size()) + " members");
  std::vector<HEntity> out;
  for (std::uint32_t mask = 0; mask < (1u << ms.size()); ++mask) {
    std::vector<HEntity> sub;
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (mask >> i & 1) sub.push_back(ms[i]);
    out.push_back(HEntity::set(std::move(sub)));
  }
  return HEntity::set(std::move(out));
}

HEntity big_union(HEntity a) {
  std::vector<HEntity> out;
  for (auto m : a.members()) out.insert(out.end(), m.members().begin(), m.members().end());
  return HEntity::set(std::move(out));
}

HEntity pair(HEntity x, HEntity y) { return HEntity::set({x, HEntity::set({x, y})}); }

std::optional<std::pair<HEntity, HEntity>> unpair(HEntity p) {
  if (p.is_atom()) return std::nullopt;
  const auto& ms = p.members();
  if (ms.size() != 2) return std::nullopt;  // even <x,x> = {x,{x}} has two members
  for (int k = 0; k < 2; ++k) {
    HEntity x = ms[k], s = ms[1 - k];
    if (s.is_atom() || !s.contains(x)) continue;
    if (s.size() == 1) return std::make_pair(x, x);
    if (s.size() == 2) {
      HEntity y = s.members()[0] == x ? s.members()[1] : s.members()[0];
      if (pair(x, y) == p) return std::make_pair(x, y);
    }
  }
  return std::nullopt;
}

HEntity tuple(std::span<const HEntity> xs) {
  if (xs.size() < 2) fail(ErrorKind::InvalidArgument, "tuples need at least two components");
  if (xs.size() == 2) return pair(xs[0], xs[1]);
  std::vector<HEntity> out;
  for (std::size_t k = 0; k < xs.size(); ++k) out.push_back(pair(HEntity::atom("#" + std::to_string(k + 1)), xs[k]));
  return HEntity::set(std::move(out));
}

HEntity cartesian(HEntity a, HEntity b) {
  std::vector<HEntity> out;
  for (auto x : a.members())
    for (auto y : b.members()) out.push_back(pair(x, y));
  return HEntity::set(std::move(out));
}

namespace {
template <class Pick>
HEntity project(HEntity p, Pick pick) {
  std::vector<HEntity> out;
  for (auto m : p.members())
    if (auto xy = unpair(m); xy && pick(*xy)) out.push_back(pick(*xy).value());
  return HEntity::set(std::move(out));
}
}  // namespace

HEntity domain(HEntity p) {
  return project(p, [](const auto& xy) { return std::optional<HEntity>(xy.first); });
}
HEntity range(HEntity p) {
  return project(p, [](const auto& xy) { return std::optional<HEntity>(xy.second); });
}
HEntity image(HEntity p, HEntity b) {
  return project(p, [&](const auto& xy) {
    return b.contains(xy.first) ? std::optional<HEntity>(xy.second) : std::nullopt;
  });
}
HEntity preimage(HEntity p, HEntity b) {
  return project(p, [&](const auto& xy) {
    return b.contains(xy.second) ? std::optional<HEntity>(xy.first) : std::nullopt;
  });
}

bool is_function(HEntity p, HEntity a, HEntity b) {
  if (p.is_atom() || a.is_atom() || b.is_atom()) return false;
  std::map<HEntity, HEntity> graph;
  for (auto m : p.members()) {
    auto xy = unpair(m);
    if (!xy || !a.contains(xy->first) || !b.contains(xy->second)) return false;
    if (!graph.emplace(xy->first, xy->second).second) return false;
  }
  return graph.size() == a.size();
}

std::optional<HEntity> apply(HEntity f, HEntity x) {
  std::optional<HEntity> out;
  for (auto m : f.members()) {
    auto xy = unpair(m);
    if (!xy || xy->first != x) continue;
    if (out && *out != xy->second) return std::nullopt;
    out = xy->second;
  }
  return out;
}

// ---------------------------------------------------------------- universe

SuperUniverse SuperUniverse::build(std::size_t atom_count, std::size_t depth_cap, std::size_t size_cap) {
  if (atom_count == 0 || atom_count > 26) fail(ErrorKind::InvalidArgument, "atom count must lie in 1..26");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < atom_count; ++i) labels.emplace_back(1, static_cast<char>('a' + i));
  return build(labels, depth_cap, size_cap);
}

SuperUniverse SuperUniverse::build(const std::vector<std::string>& atom_labels, std::size_t depth_cap,
                                   std::size_t size_cap) {
  if (depth_cap > 3) fail(ErrorKind::InvalidArgument, "depth cap is at most 3");
  if (atom_labels.empty()) fail(ErrorKind::InvalidArgument, "need at least one atom");
  SuperUniverse u;
  std::vector<HEntity> x;
  for (const auto& l : atom_labels) {
    if (l.starts_with("#")) fail(ErrorKind::InvalidArgument, "labels starting with # are reserved");
    x.push_back(HEntity::atom(l));
  }
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  if (x.size() != atom_labels.size()) fail(ErrorKind::InvalidArgument, "duplicate atom labels");
  u.levels_.push_back(x);
  u.base_.insert(x.begin(), x.end());
  for (std::size_t n = 0; n < depth_cap; ++n) {
    const auto& prev = u.levels_.back();
    std::size_t k = prev.size();
    if (k >= 63 || x.size() + (std::size_t{1} << k) > size_cap)
      fail(ErrorKind::SizeExplosion, "V_" + std::to_string(n + 1) + " would have " +
                                         (k >= 63 ? std::string("more than 2^63") : std::to_string(x.size() + (std::size_t{1} << k))) +
                                         " elements");
    std::unordered_set<HEntity, HEntityHash> seen(prev.begin(), prev.end());
    std::vector<HEntity> next = prev;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<HEntity> sub;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) sub.push_back(prev[i]);
      HEntity s = HEntity::set(std::move(sub));
      if (seen.insert(s).second) next.push_back(s);
    }
    u.levels_.push_back(std::move(next));
  }
  u.all_.insert(u.levels_.back().begin(), u.levels_.back().end());
  return u;
}

std::size_t SuperUniverse::rank(HEntity e) const {
  if (!contains(e)) fail(ErrorKind::NotInUniverse, e.to_string());
  return e.rank();
}

bool SuperUniverse::over_base(HEntity e) const {
  if (e.is_atom()) return base_.count(e) > 0;
  for (auto m : e.members())
    if (!over_base(m)) return false;
  return true;
}

// ---------------------------------------------------------------- formulas

namespace {
using K = LFormula::Kind;
}

LFormula LFormula::in(LTerm a, LTerm b) {
  return LFormula(std::make_shared<const Node>(Node{K::In, std::move(a), std::move(b), {}, {}}));
}
LFormula LFormula::eq(LTerm a, LTerm b) {
  return LFormula(std::make_shared<const Node>(Node{K::Eq, std::move(a), std::move(b), {}, {}}));
}
LFormula LFormula::negation(LFormula f) {
  return LFormula(std::make_shared<const Node>(Node{K::Not, {}, {}, {}, {std::move(f)}}));
}
LFormula LFormula::binary(Kind k, LFormula a, LFormula b) {
  if (k != K::And && k != K::Or && k != K::Implies && k != K::Iff)
    fail(ErrorKind::InvalidArgument, "not a binary connective");
  return LFormula(std::make_shared<const Node>(Node{k, {}, {}, {}, {std::move(a), std::move(b)}}));
}
LFormula LFormula::forall_in(std::string var, LTerm bound, LFormula body) {
  return LFormula(std::make_shared<const Node>(Node{K::ForallIn, {}, std::move(bound), std::move(var), {std::move(body)}}));
}
LFormula LFormula::exists_in(std::string var, LTerm bound, LFormula body) {
  return LFormula(std::make_shared<const Node>(Node{K::ExistsIn, {}, std::move(bound), std::move(var), {std::move(body)}}));
}

namespace {

void term_vars(const LTerm& t, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.kind == LTerm::Kind::Var && !bound.count(t.var)) out.insert(t.var);
  for (const auto& i : t.items) term_vars(i, bound, out);
}

void collect_free(const LFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case K::In:
    case K::Eq:
      term_vars(f.lhs(), bound, out);
      term_vars(f.rhs(), bound, out);
      return;
    case K::Not:
      collect_free(f.a(), bound, out);
      return;
    case K::ForallIn:
    case K::ExistsIn: {
      term_vars(f.bound(), bound, out);
      bool fresh = bound.insert(f.var()).second;
      collect_free(f.a(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    default:
      collect_free(f.a(), bound, out);
      collect_free(f.b(), bound, out);
  }
}

std::string render_term(const LTerm& t) {
  switch (t.kind) {
    case LTerm::Kind::Const: return t.value.to_string();
    case LTerm::Kind::Var: return t.var;
    case LTerm::Kind::Tuple: {
      std::string s = "<";
      for (std::size_t i = 0; i < t.items.size(); ++i) s += (i ? "," : "") + render_term(t.items[i]);
      return s + ">";
    }
  }
  return {};
}

LTerm rename_term(const LTerm& t, const std::map<std::string, std::string>& ren) {
  LTerm out = t;
  if (t.kind == LTerm::Kind::Var)
    if (auto it = ren.find(t.var); it != ren.end()) out.var = it->second;
  for (auto& i : out.items) i = rename_term(i, ren);
  return out;
}

LFormula rename_rec(const LFormula& f, std::map<std::string, std::string> ren, const std::string& suffix) {
  switch (f.kind()) {
    case K::In: return LFormula::in(rename_term(f.lhs(), ren), rename_term(f.rhs(), ren));
    case K::Eq: return LFormula::eq(rename_term(f.lhs(), ren), rename_term(f.rhs(), ren));
    case K::Not: return LFormula::negation(rename_rec(f.a(), ren, suffix));
    case K::ForallIn:
    case K::ExistsIn: {
      LTerm b = rename_term(f.bound(), ren);
      std::string v = f.var() + suffix;
      ren[f.var()] = v;
      LFormula body = rename_rec(f.a(), ren, suffix);
      return f.kind() == K::ForallIn ? LFormula::forall_in(v, b, body) : LFormula::exists_in(v, b, body);
    }
    default: return LFormula::binary(f.kind(), rename_rec(f.a(), ren, suffix), rename_rec(f.b(), ren, suffix));
  }
}

LTerm star_term(const LTerm& t, const std::function<HEntity(HEntity)>& star) {
  LTerm out = t;
  if (t.kind == LTerm::Kind::Const) out.value = star(t.value);
  for (auto& i : out.items) i = star_term(i, star);
  return out;
}

void check_form(const LFormula& f, std::set<std::string>& bound) {
  switch (f.kind()) {
    case K::In:
    case K::Eq: return;
    case K::Not: check_form(f.a(), bound); return;
    case K::ForallIn:
    case K::ExistsIn:
      if (!bound.insert(f.var()).second)
        fail(ErrorKind::InvalidArgument, "variable " + f.var() + " is quantified again inside its own scope");
      check_form(f.a(), bound);
      bound.erase(f.var());
      return;
    default:
      check_form(f.a(), bound);
      check_form(f.b(), bound);
  }
}

// Innermost binding last; names point into the formula, which outlives the evaluation.
using Env = std::vector<std::pair<const std::string*, HEntity>>;

HEntity term_value(const LTerm& t, const Env& env) {
  switch (t.kind) {
    case LTerm::Kind::Const: return t.value;
    case LTerm::Kind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (*it->first == t.var) return it->second;
      fail(ErrorKind::NotASentence, "variable " + t.var + " is unassigned");
    case LTerm::Kind::Tuple: {
      std::vector<HEntity> xs;
      for (const auto& i : t.items) xs.push_back(term_value(i, env));
      return tuple(xs);
    }
  }
  return {};
}

bool eval_rec(const LFormula& f, Env& env) {
  switch (f.kind()) {
    case K::In: {
      HEntity x = term_value(f.lhs(), env), s = term_value(f.rhs(), env);
      return s.contains(x);  // atoms have no members
    }
    case K::Eq: return term_value(f.lhs(), env) == term_value(f.rhs(), env);
    case K::Not: return !eval_rec(f.a(), env);
    case K::And: return eval_rec(f.a(), env) && eval_rec(f.b(), env);
    case K::Or: return eval_rec(f.a(), env) || eval_rec(f.b(), env);
    case K::Implies: return !eval_rec(f.a(), env) || eval_rec(f.b(), env);
    case K::Iff: return eval_rec(f.a(), env) == eval_rec(f.b(), env);
    case K::ForallIn:
    case K::ExistsIn: {
      bool all = f.kind() == K::ForallIn;
      HEntity s = term_value(f.bound(), env);
      for (auto m : s.members()) {
        env.emplace_back(&f.var(), m);
        bool v = eval_rec(f.a(), env);
        env.pop_back();
        if (v != all) return !all;
      }
      return all;
    }
  }
  return false;
}

void term_consts(const LTerm& t, std::vector<HEntity>& out) {
  if (t.kind == LTerm::Kind::Const) out.push_back(t.value);
  for (const auto& i : t.items) term_consts(i, out);
}

void formula_consts(const LFormula& f, std::vector<HEntity>& out) {
  switch (f.kind()) {
    case K::In:
    case K::Eq:
      term_consts(f.lhs(), out);
      term_consts(f.rhs(), out);
      return;
    case K::Not: formula_consts(f.a(), out); return;
    case K::ForallIn:
    case K::ExistsIn:
      term_consts(f.bound(), out);
      formula_consts(f.a(), out);
      return;
    default:
      formula_consts(f.a(), out);
      formula_consts(f.b(), out);
  }
}

// ---------------------------------------------------------------- text form

struct Tok {
  enum T { Name, Sym, End } t;
  std::string s;
  std::size_t pos;
};

std::vector<Tok> lex(std::string_view in) {
  static const std::vector<std::pair<std::string_view, std::string_view>> syms = {
      {"<->", "<->"}, {"↔", "<->"}, {"->", "->"}, {"→", "->"}, {"∈", "in"}, {"∉", "notin"}, {"≠", "!="},
      {"!=", "!="},   {"¬", "~"},   {"~", "~"},   {"∧", "&"},  {"&", "&"},  {"∨", "|"},   {"|", "|"},
      {"∀", "forall"}, {"∃", "exists"}, {"(", "("}, {")", ")"}, {"[", "["}, {"]", "]"}, {"{", "{"},
      {"}", "}"},     {"<", "<"},   {">", ">"},   {",", ","},  {"=", "="}};
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < in.size()) {
    unsigned char c = in[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalnum(c) || c == '_' || c == '#' || c == '*' || c == '\'') {
      std::size_t j = i;
      while (j < in.size() && (std::isalnum(static_cast<unsigned char>(in[j])) || in[j] == '_' || in[j] == '#' ||
                               in[j] == '*' || in[j] == '\''))
        ++j;
      std::string w(in.substr(i, j - i));
      if (w == "forall" || w == "exists" || w == "in" || w == "notin")
        out.push_back({Tok::Sym, w, i});
      else
        out.push_back({Tok::Name, w, i});
      i = j;
      continue;
    }
    bool hit = false;
    for (const auto& [text, sym] : syms)
      if (in.substr(i).starts_with(text)) {
        out.push_back({Tok::Sym, std::string(sym), i});
        i += text.size();
        hit = true;
        break;
      }
    if (!hit) fail(ErrorKind::ParseError, "unexpected character at offset " + std::to_string(i));
  }
  out.push_back({Tok::End, "", in.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, HEntity>& consts) : toks_(lex(text)), consts_(consts) {}

  LFormula parse() {
    LFormula f = iff();
    if (peek().t != Tok::End) error("trailing input");
    return f;
  }

 private:
  const Tok& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool sym(std::string_view s) const { return peek().t == Tok::Sym && peek().s == s; }
  bool accept(std::string_view s) {
    if (!sym(s)) return false;
    ++i_;
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) error("expected '" + std::string(s) + "'");
  }
  [[noreturn]] void error(const std::string& m) const {
    fail(ErrorKind::ParseError, m + " at offset " + std::to_string(peek().pos));
  }

  LFormula iff() {
    LFormula f = implies();
    while (accept("<->")) f = LFormula::binary(K::Iff, f, implies());
    return f;
  }
  LFormula implies() {
    LFormula f = disj();
    if (accept("->")) return LFormula::binary(K::Implies, f, implies());
    return f;
  }
  LFormula disj() {
    LFormula f = conj();
    while (accept("|")) f = LFormula::binary(K::Or, f, conj());
    return f;
  }
  LFormula conj() {
    LFormula f = unary();
    while (accept("&")) f = LFormula::binary(K::And, f, unary());
    return f;
  }
  LFormula unary() {
    if (accept("~")) return LFormula::negation(unary());
    if (sym("(") && peek(1).t == Tok::Sym && (peek(1).s == "forall" || peek(1).s == "exists")) {
      ++i_;
      bool all = peek().s == "forall";
      ++i_;
      if (peek().t != Tok::Name) error("expected a variable");
      std::string v = peek().s;
      if (consts_.count(v)) error("cannot quantify over the constant " + v);
      ++i_;
      expect("in");
      LTerm b = term();
      expect(")");
      LFormula body = unary();
      return all ? LFormula::forall_in(v, b, body) : LFormula::exists_in(v, b, body);
    }
    if (accept("[")) {
      LFormula f = iff();
      expect("]");
      return f;
    }
    // '(' may open a parenthesized formula or nothing else, since terms never start with '('
    if (accept("(")) {
      LFormula f = iff();
      expect(")");
      return f;
    }
    LTerm a = term();
    if (accept("in")) return LFormula::in(a, term());
    if (accept("notin")) return LFormula::negation(LFormula::in(a, term()));
    if (accept("=")) return LFormula::eq(a, term());
    if (accept("!=")) return LFormula::negation(LFormula::eq(a, term()));
    error("expected 'in' or '='");
  }
  LTerm term() {
    if (peek().t == Tok::Name) {
      std::string n = peek().s;
      ++i_;
      if (auto it = consts_.find(n); it != consts_.end()) return LTerm::constant(it->second);
      return LTerm::variable(n);
    }
    if (accept("<")) {
      std::vector<LTerm> xs{term()};
      while (accept(",")) xs.push_back(term());
      expect(">");
      if (xs.size() < 2) error("tuples need at least two components");
      return LTerm::tuple(std::move(xs));
    }
    if (accept("{")) {
      std::vector<HEntity> ms;
      if (!accept("}")) {
        do {
          LTerm t = term();
          if (t.kind != LTerm::Kind::Const) error("set literals take constants only");
          ms.push_back(t.value);
        } while (accept(","));
        expect("}");
      }
      return LTerm::constant(HEntity::set(std::move(ms)));
    }
    error("expected a term");
  }

  std::vector<Tok> toks_;
  std::size_t i_ = 0;
  const std::map<std::string, HEntity>& consts_;
};

std::string render_rec(const LFormula& f) {
  switch (f.kind()) {
    case K::In: return render_term(f.lhs()) + " ∈ " + render_term(f.rhs());
    case K::Eq: return render_term(f.lhs()) + " = " + render_term(f.rhs());
    case K::Not: {
      auto k = f.a().kind();
      std::string inner = render_rec(f.a());
      return (k == K::In || k == K::Eq) ? "¬(" + inner + ")" : "¬" + inner;
    }
    case K::ForallIn:
    case K::ExistsIn:
      return std::string(f.kind() == K::ForallIn ? "(∀" : "(∃") + f.var() + " ∈ " + render_term(f.bound()) + ")" +
             [&] {
               auto k = f.a().kind();
               std::string inner = render_rec(f.a());
               return (k == K::In || k == K::Eq) ? "(" + inner + ")" : inner;
             }();
    default: {
      std::string op = f.kind() == K::And ? " ∧ " : f.kind() == K::Or ? " ∨ " : f.kind() == K::Implies ? " → " : " ↔ ";
      return "(" + render_rec(f.a()) + op + render_rec(f.b()) + ")";
    }
  }
}

}  // namespace

LFormula parse_formula(std::string_view text, const std::map<std::string, HEntity>& constants) {
  return Parser(text, constants).parse();
}

std::string render(const LFormula& f) { return render_rec(f); }

std::set<std::string> free_vars(const LFormula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_sentence(const LFormula& f) { return free_vars(f).empty(); }

std::size_t depth(const LFormula& f) {
  switch (f.kind()) {
    case K::In:
    case K::Eq: return 0;
    case K::Not:
    case K::ForallIn:
    case K::ExistsIn: return 1 + depth(f.a());
    default: return 1 + std::max(depth(f.a()), depth(f.b()));
  }
}

void check_bounded_form(const LFormula& f) {
  std::set<std::string> bound;
  check_form(f, bound);
}

LFormula rename_bound(const LFormula& f, const std::string& suffix) { return rename_rec(f, {}, suffix); }

LFormula star_transform(const LFormula& f, const std::function<HEntity(HEntity)>& star) {
  switch (f.kind()) {
    case K::In: return LFormula::in(star_term(f.lhs(), star), star_term(f.rhs(), star));
    case K::Eq: return LFormula::eq(star_term(f.lhs(), star), star_term(f.rhs(), star));
    case K::Not: return LFormula::negation(star_transform(f.a(), star));
    case K::ForallIn: return LFormula::forall_in(f.var(), star_term(f.bound(), star), star_transform(f.a(), star));
    case K::ExistsIn: return LFormula::exists_in(f.var(), star_term(f.bound(), star), star_transform(f.a(), star));
    default: return LFormula::binary(f.kind(), star_transform(f.a(), star), star_transform(f.b(), star));
  }
}

bool eval_with(const LFormula& f, const Assignment& env) {
  Env e;
  for (const auto& [k, v] : env) e.emplace_back(&k, v);
  return eval_rec(f, e);
}

bool eval_formula(const LFormula& f, const SuperUniverse& u) {
  if (auto fv = free_vars(f); !fv.empty()) fail(ErrorKind::NotASentence, "free variable " + *fv.begin());
  std::vector<HEntity> cs;
  formula_consts(f, cs);
  for (auto c : cs)
    if (!u.contains(c)) fail(ErrorKind::NotInUniverse, c.to_string());
  Env e;
  return eval_rec(f, e);
}

}  // namespace nsa::super
