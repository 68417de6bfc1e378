#include <algorithm>
#include <numeric>
#include <set>

#include "nsa/ultrapower_seq.hpp"

namespace nsa::seq {

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(const Poly& num, const Poly& den) {
  if (den.is_zero()) fail(ErrorKind::DivisionByZero, "zero denominator polynomial");
  if (num.is_zero()) {
    num_ = Poly();
    den_ = Poly(1);
    return;
  }
  Poly g = Poly::gcd(num, den);
  Poly n = num, d = den;
  if (g.degree() > 0) {
    n = Poly::divmod(num, g).first;
    d = Poly::divmod(den, g).first;
  }
  Rational inv = d.lc().inverse();
  num_ = n * Poly(inv);
  den_ = d * Poly(inv);
}

Rational RatFunc::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (d.is_zero()) fail(ErrorKind::DivisionByZero, "pole of " + to_string() + " at " + x.to_string());
  return num_.eval(x) / d;
}

Rational RatFunc::root_bound() const {
  Rational a = num_.is_zero() ? Rational(1) : cauchy_root_bound(num_);
  Rational b = cauchy_root_bound(den_);
  return a > b ? a : b;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
RatFunc operator*(const RatFunc& a, const RatFunc& b) { return RatFunc(a.num_ * b.num_, a.den_ * b.den_); }
RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "division by the zero function");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RatFunc::to_string() const {
  if (den_ == Poly(1)) return num_.to_string("n");
  return "(" + num_.to_string("n") + ")/(" + den_.to_string("n") + ")";
}

// ---------------------------------------------------------------- SequenceReal

SequenceReal SequenceReal::constant(const Rational& c) { return of(RatFunc(c)); }

SequenceReal SequenceReal::of(const RatFunc& f) {
  SequenceReal s;
  s.pieces = {f};
  for (const auto& r : integer_roots_from(f.den(), 0)) s.exceptions[r.get_ui()] = Rational(0);
  return s;
}

SequenceReal SequenceReal::periodic(const std::vector<Rational>& values) {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "empty period");
  SequenceReal s;
  s.modulus = values.size();
  for (const auto& v : values) s.pieces.emplace_back(v);
  return s;
}

Rational SequenceReal::at(std::uint64_t n) const {
  auto it = exceptions.find(n);
  if (it != exceptions.end()) return it->second;
  return piece(n).eval(Rational(Integer(static_cast<unsigned long>(n))));
}

SequenceReal SequenceReal::lifted(std::uint64_t L) const {
  if (L == 0 || L % modulus) fail(ErrorKind::InvalidArgument, "lift to a non-multiple modulus");
  if (L == modulus) return *this;
  SequenceReal s;
  s.modulus = L;
  s.pieces.reserve(L);
  for (std::uint64_t r = 0; r < L; ++r) s.pieces.push_back(pieces[r % modulus]);
  s.exceptions = exceptions;
  return s;
}

std::string SequenceReal::to_string() const {
  std::string out = "<";
  for (std::uint64_t r = 0; r < modulus; ++r) {
    if (r) out += " | ";
    if (modulus > 1) out += "n=" + std::to_string(r) + " mod " + std::to_string(modulus) + ": ";
    out += pieces[r].to_string();
  }
  for (const auto& [n, v] : exceptions) out += "; s_" + std::to_string(n) + "=" + v.to_string();
  return out + ">";
}

void validate(const SequenceReal& s) {
  if (s.modulus == 0 || s.pieces.size() != s.modulus) fail(ErrorKind::InvalidArgument, "piece count != modulus");
  for (std::uint64_t r = 0; r < s.modulus; ++r)
    for (const auto& root : integer_roots_from(s.pieces[r].den(), 0)) {
      std::uint64_t n = root.get_ui();
      if (n % s.modulus == r && !s.exceptions.count(n))
        fail(ErrorKind::InvalidArgument, "pole at n=" + std::to_string(n) + " without an exception");
    }
}

SequenceReal embed_rational(const Rational& r) { return SequenceReal::constant(r); }

namespace {

std::uint64_t lcm_mod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t l = std::lcm(a, b);
  if (l > 4096) fail(ErrorKind::InvalidArgument, "combined modulus exceeds 4096");
  return l;
}

template <class Op>
SequenceReal combine(const SequenceReal& s, const SequenceReal& t, Op op) {
  std::uint64_t L = lcm_mod(s.modulus, t.modulus);
  SequenceReal r;
  r.modulus = L;
  r.pieces.reserve(L);
  for (std::uint64_t k = 0; k < L; ++k) r.pieces.push_back(op(s.piece(k), t.piece(k)));
  std::set<std::uint64_t> idx;
  for (const auto& [n, v] : s.exceptions) idx.insert(n);
  for (const auto& [n, v] : t.exceptions) idx.insert(n);
  for (auto n : idx) r.exceptions[n] = op(RatFunc(s.at(n)), RatFunc(t.at(n))).eval(0);
  return r;
}

}  // namespace

SequenceReal add(const SequenceReal& s, const SequenceReal& t) {
  return combine(s, t, [](const RatFunc& a, const RatFunc& b) { return a + b; });
}
SequenceReal sub(const SequenceReal& s, const SequenceReal& t) {
  return combine(s, t, [](const RatFunc& a, const RatFunc& b) { return a - b; });
}
SequenceReal mul(const SequenceReal& s, const SequenceReal& t) {
  return combine(s, t, [](const RatFunc& a, const RatFunc& b) { return a * b; });
}

SequenceReal div(const SequenceReal& s, const SequenceReal& t, UltrafilterOracle& oracle) {
  if (seq_compare(t, embed_rational(0), oracle) == Order::Equal)
    fail(ErrorKind::DivisionByZeroClass, "divisor is 0 almost everywhere");
  std::uint64_t L = lcm_mod(s.modulus, t.modulus);
  SequenceReal r;
  r.modulus = L;
  for (std::uint64_t k = 0; k < L; ++k) {
    const RatFunc& tp = t.piece(k);
    r.pieces.push_back(tp.is_zero() ? RatFunc(0) : s.piece(k) / tp);
  }
  std::set<std::uint64_t> idx;
  for (const auto& [n, v] : s.exceptions) idx.insert(n);
  for (const auto& [n, v] : t.exceptions) idx.insert(n);
  for (std::uint64_t k = 0; k < L; ++k) {
    const RatFunc& tp = t.piece(k);
    if (tp.is_zero()) continue;
    // zeros of t in this class; exact, so no horizon cut-off is needed
    for (const auto& root : integer_roots_from(tp.num(), 0))
      if (root.get_ui() % L == k) idx.insert(root.get_ui());
  }
  for (auto n : idx) {
    Rational tv = t.at(n);
    r.exceptions[n] = tv.is_zero() ? Rational(0) : s.at(n) / tv;
  }
  return r;
}

std::string_view order_name(Order o) {
  switch (o) {
    case Order::Less: return "Less";
    case Order::Equal: return "Equal";
    case Order::Greater: return "Greater";
  }
  return "?";
}

EPSet compare_set(const SequenceReal& s, const SequenceReal& t, Order which, std::uint64_t horizon) {
  SequenceReal d = sub(t, s);
  auto wanted = [which](int sign) {
    return which == Order::Less ? sign > 0 : (which == Order::Equal ? sign == 0 : sign < 0);
  };
  std::vector<std::uint64_t> res;
  Rational bound(0);
  for (std::uint64_t k = 0; k < d.modulus; ++k) {
    if (wanted(d.pieces[k].eventual_sign())) res.push_back(k);
    Rational b = d.pieces[k].root_bound();
    if (b > bound) bound = b;
  }
  EPSet out = EPSet::periodic(d.modulus, res);
  std::set<std::uint64_t> probe;
  for (const auto& [n, v] : d.exceptions) probe.insert(n);
  std::uint64_t limit = std::min<std::uint64_t>(horizon, bound.ceil().get_ui());
  for (std::uint64_t n = 0; n < limit; ++n) probe.insert(n);
  for (auto n : probe) {
    bool actual;
    try {
      actual = wanted(d.at(n).sign());
    } catch (const Error&) {
      continue;
    }
    bool base = out.pattern_contains(n);
    if (actual && !base) out.added.push_back(n);
    if (!actual && base) out.removed.push_back(n);
  }
  return out;
}

Order seq_compare(const SequenceReal& s, const SequenceReal& t, UltrafilterOracle& oracle) {
  if (oracle.contains(compare_set(s, t, Order::Less, 0))) return Order::Less;
  if (oracle.contains(compare_set(s, t, Order::Equal, 0))) return Order::Equal;
  return Order::Greater;
}

// ---------------------------------------------------------------- relations

RelationDesc::RelationDesc(std::size_t arity, Node root) : arity_(arity), root_(std::move(root)) {
  std::vector<const Node*> stack{&root_};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->op == Op::Atom) {
      if (n->poly.nvars() != arity_) fail(ErrorKind::ArityError, "atom arity differs from relation arity");
    } else {
      std::size_t want = n->op == Op::Not ? 1 : 2;
      if (n->op == Op::Not ? n->kids.size() != want : n->kids.size() < want)
        fail(ErrorKind::InvalidArgument, "malformed relation tree");
      for (const auto& k : n->kids) stack.push_back(&k);
    }
  }
}

RelationDesc RelationDesc::atom(const MPoly& p, Cmp c) {
  Node n;
  n.op = Op::Atom;
  n.poly = p;
  n.cmp = c;
  return RelationDesc(p.nvars(), std::move(n));
}

RelationDesc RelationDesc::leq() { return atom(MPoly::variable(2, 0) - MPoly::variable(2, 1), Cmp::Le); }
RelationDesc RelationDesc::lt() { return atom(MPoly::variable(2, 0) - MPoly::variable(2, 1), Cmp::Lt); }

RelationDesc RelationDesc::operator&&(const RelationDesc& o) const {
  if (o.arity_ != arity_) fail(ErrorKind::ArityError, "conjunction of different arities");
  Node n;
  n.op = Op::And;
  n.kids = {root_, o.root_};
  return RelationDesc(arity_, std::move(n));
}

RelationDesc RelationDesc::operator||(const RelationDesc& o) const {
  if (o.arity_ != arity_) fail(ErrorKind::ArityError, "disjunction of different arities");
  Node n;
  n.op = Op::Or;
  n.kids = {root_, o.root_};
  return RelationDesc(arity_, std::move(n));
}

RelationDesc RelationDesc::operator!() const {
  Node n;
  n.op = Op::Not;
  n.kids = {root_};
  return RelationDesc(arity_, std::move(n));
}

namespace {

bool cmp_sign(Cmp c, int s) {
  switch (c) {
    case Cmp::Lt: return s < 0;
    case Cmp::Le: return s <= 0;
    case Cmp::Eq: return s == 0;
    case Cmp::Ne: return s != 0;
    case Cmp::Ge: return s >= 0;
    case Cmp::Gt: return s > 0;
  }
  return false;
}

template <class Leaf>
bool eval_tree(const RelationDesc::Node& n, const Leaf& leaf) {
  switch (n.op) {
    case RelationDesc::Op::Atom: return leaf(n);
    case RelationDesc::Op::Not: return !eval_tree(n.kids[0], leaf);
    case RelationDesc::Op::And:
      for (const auto& k : n.kids)
        if (!eval_tree(k, leaf)) return false;
      return true;
    case RelationDesc::Op::Or:
      for (const auto& k : n.kids)
        if (eval_tree(k, leaf)) return true;
      return false;
  }
  return false;
}

void collect_atoms(const RelationDesc::Node& n, std::vector<const RelationDesc::Node*>& out) {
  if (n.op == RelationDesc::Op::Atom)
    out.push_back(&n);
  else
    for (const auto& k : n.kids) collect_atoms(k, out);
}

std::uint64_t common_modulus(std::span<const SequenceReal> args) {
  std::uint64_t L = 1;
  for (const auto& a : args) L = lcm_mod(L, a.modulus);
  return L;
}

// Residues k mod L on which the relation eventually holds.
std::vector<std::uint64_t> eventual_truth(const RelationDesc& p, std::span<const SequenceReal> args,
                                          std::uint64_t L) {
  std::vector<std::uint64_t> res;
  for (std::uint64_t k = 0; k < L; ++k) {
    std::vector<RatFunc> xs;
    for (const auto& a : args) xs.push_back(a.piece(k));
    bool v = eval_tree(p.root(), [&](const RelationDesc::Node& atom) {
      RatFunc val = atom.poly.eval<RatFunc>(std::span<const RatFunc>(xs));
      return cmp_sign(atom.cmp, val.eventual_sign());
    });
    if (v) res.push_back(k);
  }
  return res;
}

}  // namespace

bool RelationDesc::holds(std::span<const Rational> xs) const {
  if (xs.size() != arity_) fail(ErrorKind::ArityError, "relation applied to wrong number of arguments");
  return eval_tree(root_, [&](const Node& atom) { return cmp_sign(atom.cmp, atom.poly.eval<Rational>(xs).sign()); });
}

bool RInterval::contains(const Rational& x) const {
  if (lo && (x < *lo || (x == *lo && lo_open))) return false;
  if (hi && (x > *hi || (x == *hi && hi_open))) return false;
  return true;
}

bool RInterval::empty() const {
  if (!lo || !hi) return false;
  return *lo > *hi || (*lo == *hi && (lo_open || hi_open));
}

bool contains(const IntervalUnion& a, const Rational& x) {
  return std::any_of(a.begin(), a.end(), [&](const RInterval& iv) { return iv.contains(x); });
}

RelationDesc membership_relation(const IntervalUnion& a) {
  MPoly x = MPoly::variable(1, 0);
  RelationDesc none = RelationDesc::atom(MPoly::constant(1, 1), Cmp::Lt);
  std::optional<RelationDesc> acc;
  for (const auto& iv : a) {
    RelationDesc part = RelationDesc::atom(MPoly::constant(1, 0), Cmp::Eq);  // true
    if (iv.lo) part = part && RelationDesc::atom(x - MPoly::constant(1, *iv.lo), iv.lo_open ? Cmp::Gt : Cmp::Ge);
    if (iv.hi) part = part && RelationDesc::atom(x - MPoly::constant(1, *iv.hi), iv.hi_open ? Cmp::Lt : Cmp::Le);
    acc = acc ? (*acc || part) : part;
  }
  return acc ? *acc : none;
}

bool transfer_relation_holds(const RelationDesc& p, std::span<const SequenceReal> args, UltrafilterOracle& oracle) {
  if (args.size() != p.arity()) fail(ErrorKind::ArityError, "relation applied to wrong number of sequences");
  std::uint64_t L = common_modulus(args);
  return oracle.contains(EPSet::periodic(L, eventual_truth(p, args, L)));
}

bool star_set_membership(const IntervalUnion& a, const SequenceReal& s, UltrafilterOracle& oracle) {
  return transfer_relation_holds(membership_relation(a), std::span<const SequenceReal>(&s, 1), oracle);
}

bool star_set_algebra_check(std::span<const IntervalUnion> sets, const SequenceReal& s, UltrafilterOracle& oracle) {
  if (sets.empty()) return true;
  std::span<const SequenceReal> one(&s, 1);
  bool any = false, all = true;
  std::optional<RelationDesc> uni, inter;
  for (const auto& a : sets) {
    bool m = star_set_membership(a, s, oracle);
    any = any || m;
    all = all && m;
    RelationDesc r = membership_relation(a);
    uni = uni ? (*uni || r) : r;
    inter = inter ? (*inter && r) : r;
  }
  return transfer_relation_holds(*uni, one, oracle) == any && transfer_relation_holds(*inter, one, oracle) == all;
}

bool char_func_transfer_check(const RelationDesc& p, std::span<const SequenceReal> args, UltrafilterOracle& oracle) {
  std::uint64_t L = common_modulus(args);
  // the window must lie beyond every zero and pole; values there are computed numerically
  std::vector<const RelationDesc::Node*> atoms;
  collect_atoms(p.root(), atoms);
  Rational bound(1);
  for (std::uint64_t k = 0; k < L; ++k) {
    std::vector<RatFunc> xs;
    for (const auto& a : args) {
      xs.push_back(a.piece(k));
      if (a.piece(k).root_bound() > bound) bound = a.piece(k).root_bound();
    }
    for (const auto* atom : atoms) {
      Rational b = atom->poly.eval<RatFunc>(std::span<const RatFunc>(xs)).root_bound();
      if (b > bound) bound = b;
    }
  }
  std::uint64_t start = bound.ceil().get_ui() + 1;
  for (const auto& a : args)
    if (!a.exceptions.empty()) start = std::max(start, a.exceptions.rbegin()->first + 1);
  start = ((start + L - 1) / L) * L;
  std::vector<std::uint64_t> res;
  for (std::uint64_t k = 0; k < L; ++k) {
    std::optional<bool> chi;
    for (std::uint64_t j = 0; j < 8; ++j) {
      std::uint64_t n = start + j * L + k;
      std::vector<Rational> xs;
      for (const auto& a : args) xs.push_back(a.at(n));
      bool v = p.holds(xs);
      if (chi && *chi != v) return false;
      chi = v;
    }
    if (*chi) res.push_back(k);
  }
  bool pointwise = oracle.contains(EPSet::periodic(L, res));
  return pointwise == transfer_relation_holds(p, args, oracle);
}

// ---------------------------------------------------------------- cross tier

SequenceReal embed_integer_exponent(const HyperRational& x) {
  auto to_poly = [](const GenPoly& g) {
    std::vector<Rational> c;
    for (const auto& t : g.terms()) {
      if (!t.exp.is_integer() || t.exp.sign() < 0)
        fail(ErrorKind::NonIntegralExponent, "exponent " + t.exp.to_string());
      std::size_t e = t.exp.num().get_ui();
      if (c.size() <= e) c.resize(e + 1);
      c[e] = t.coef;
    }
    return Poly(std::move(c));
  };
  return SequenceReal::of(RatFunc(to_poly(x.num()), to_poly(x.den())));
}

bool cross_tier_check(const HyperRational& x, std::span<const Rational> samples, const HyperRational& y,
                      UltrafilterOracle& oracle) {
  auto tier1 = [](const HyperRational& a, const HyperRational& b) {
    auto c = a <=> b;
    return c < 0 ? Order::Less : (c > 0 ? Order::Greater : Order::Equal);
  };
  SequenceReal sx = embed_integer_exponent(x);
  for (const auto& r : samples)
    if (tier1(x, HyperRational(r)) != seq_compare(sx, embed_rational(r), oracle)) return false;
  SequenceReal sy = embed_integer_exponent(y);
  return tier1(x, y) == seq_compare(sx, sy, oracle);
}

}  // namespace nsa::seq
