#include "nsa/nscalc.hpp"

#include <algorithm>
#include <initializer_list>

namespace nsa::calc {

namespace {

bool infinite(const HyperRational& x) { return classify(x).kind == Magnitude::Infinite; }
bool infinitesimal(const HyperRational& x) { return classify(x).kind == Magnitude::Infinitesimal; }

// Leading exponent of w in x (x nonzero).
Rational w_degree(const HyperRational& x) { return x.num().degree() - x.den().degree(); }

RatFunc shift_one(const RatFunc& f) { return RatFunc(f.num().compose_linear(1, 1), f.den().compose_linear(1, 1)); }

bool has_integer_root_from(const Poly& p, long lower) {
  if (p.is_zero()) return true;
  for (const auto& r : rational_roots(p))
    if (r.is_integer() && r >= Rational(lower)) return true;
  return false;
}

}  // namespace

HyperRational eval_at(const Poly& p, const HyperRational& x) {
  HyperRational acc;
  const auto& c = p.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + HyperRational(c[i]);
  return acc;
}

HyperRational eval_at(const RatFunc& f, const HyperRational& x) { return eval_at(f.num(), x) / eval_at(f.den(), x); }

HyperRational tail_point() { return HyperRational::omega(); }
HyperRational second_tail_point() { return HyperRational::omega_pow(2); }

// ---------------------------------------------------------------- sequences

std::optional<Rational> limit_via_monad(const SequenceReal& x) {
  std::optional<Rational> l;
  for (const auto& p : x.pieces) {
    auto c = classify(eval_at(p, tail_point()));
    if (!c.st) return std::nullopt;
    if (l && *l != *c.st) return std::nullopt;
    l = c.st;
  }
  return l;
}

bool is_cauchy(const SequenceReal& x) {
  std::vector<HyperRational> vals;
  for (const auto& p : x.pieces) {
    vals.push_back(eval_at(p, tail_point()));
    vals.push_back(eval_at(p, second_tail_point()));
  }
  // closeness is transitive, so comparing with the first value suffices
  return std::all_of(vals.begin(), vals.end(), [&](const HyperRational& v) { return infinitely_close(v, vals[0]); });
}

bool is_bounded(const SequenceReal& x) {
  return std::all_of(x.pieces.begin(), x.pieces.end(), [](const RatFunc& p) { return !infinite(eval_at(p, tail_point())); });
}

LimitPoints limit_points(const SequenceReal& x) {
  LimitPoints out;
  for (std::uint64_t r = 0; r < x.pieces.size(); ++r) {
    auto c = classify(eval_at(x.pieces[r], tail_point()));
    if (c.st)
      out.points.push_back(*c.st);
    else
      out.unbounded_classes.push_back(r);
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  return out;
}

// ---------------------------------------------------------------- topology

namespace {

// Lower endpoints: -inf first, then by value, closed before open.
bool lower_before(const RInterval& a, const RInterval& b) {
  if (!a.lo || !b.lo) return !a.lo && b.lo;
  if (*a.lo != *b.lo) return *a.lo < *b.lo;
  return !a.lo_open && b.lo_open;
}

// Does b start no later than where a ends, with no gap?
bool touches(const RInterval& a, const RInterval& b) {
  if (!a.hi || !b.lo) return true;
  if (*b.lo < *a.hi) return true;
  return *b.lo == *a.hi && (!a.hi_open || !b.lo_open);
}

void extend_hi(RInterval& a, const RInterval& b) {
  if (!a.hi) return;
  if (!b.hi) {
    a.hi.reset();
    a.hi_open = false;
    return;
  }
  if (*b.hi > *a.hi) {
    a.hi = b.hi;
    a.hi_open = b.hi_open;
  } else if (*b.hi == *a.hi) {
    a.hi_open = a.hi_open && b.hi_open;
  }
}

HInterval to_h(const RInterval& r) {
  HInterval h;
  if (r.lo) h.lo = HyperRational(*r.lo);
  if (r.hi) h.hi = HyperRational(*r.hi);
  h.lo_open = r.lo_open;
  h.hi_open = r.hi_open;
  return h;
}

}  // namespace

SetDesc normalize(const SetDesc& a) {
  SetDesc parts;
  for (const auto& r : a)
    if (!r.empty()) parts.push_back(r);
  std::sort(parts.begin(), parts.end(), lower_before);
  SetDesc out;
  for (const auto& r : parts) {
    if (!out.empty() && touches(out.back(), r))
      extend_hi(out.back(), r);
    else
      out.push_back(r);
  }
  for (auto& r : out) {
    if (!r.lo) r.lo_open = true;
    if (!r.hi) r.hi_open = true;
  }
  return out;
}

std::vector<HInterval> star_set(const SetDesc& a) {
  std::vector<HInterval> out;
  for (const auto& r : normalize(a)) out.push_back(to_h(r));
  return out;
}

bool star_contains(const SetDesc& a, const HyperRational& x) {
  for (const auto& h : star_set(a))
    if (h.contains(x)) return true;
  return false;
}

TopoResult topo_check(const SetDesc& raw) {
  SetDesc a = normalize(raw);
  TopoResult res;
  const HyperRational eps = HyperRational::epsilon(), w = HyperRational::omega();
  auto in_star = [&](const HyperRational& s) { return star_contains(a, s); };
  auto fail_open = [&](const Rational& r, const HyperRational& s) {
    // r in A, s in mon(r), s outside *A
    if (!contains(a, r) || in_star(s)) return;
    res.open = false;
    res.trace.push_back({"open", r, s, "s is infinitely close to " + r.to_string() + " but lies outside *A"});
  };
  auto fail_closed = [&](const Rational& r, const HyperRational& s) {
    // s in *A near-standard with st(s) = r outside A
    if (contains(a, r) || !in_star(s) || standard_part(s) != r) return;
    res.closed = false;
    res.trace.push_back({"closed", r, s, "s lies in *A and st(s) = " + r.to_string() + " is outside A"});
  };
  bool bounded = true;
  for (const auto& iv : a) {
    if (iv.lo) {
      if (iv.lo_open)
        fail_closed(*iv.lo, HyperRational(*iv.lo) + eps);
      else
        fail_open(*iv.lo, HyperRational(*iv.lo) - eps);
    } else {
      bounded = false;
      res.trace.push_back({"compact", Rational(0), -w, "-w lies in *A outside Gal(0)"});
    }
    if (iv.hi) {
      if (iv.hi_open)
        fail_closed(*iv.hi, HyperRational(*iv.hi) - eps);
      else
        fail_open(*iv.hi, HyperRational(*iv.hi) + eps);
    } else {
      bounded = false;
      res.trace.push_back({"compact", Rational(0), w, "w lies in *A outside Gal(0)"});
    }
  }
  res.compact = res.closed && bounded;
  if (!res.closed)
    for (const auto& t : std::vector<TopoWitness>(res.trace))
      if (t.criterion == "closed") {
        res.trace.push_back({"compact", t.point, t.witness, "st of a point of *A falls outside A"});
        break;
      }
  return res;
}

// ---------------------------------------------------------------- sums and products

namespace {

void check_upper(const HyperRational& upper, long lower) {
  if (!upper.integer_certified()) fail(ErrorKind::NotCertifiedInteger, upper.to_string());
  if (upper < HyperRational(lower - 1)) fail(ErrorKind::InvalidArgument, "upper bound below lower - 1");
}

void check_telescoping(const TelescopingSum& t, long lower) {
  if (t.term != t.g - shift_one(t.g))
    fail(ErrorKind::UnsupportedTermClass, "term is not g(i) - g(i+1) for g = " + t.g.to_string());
  if (has_integer_root_from(t.g.den(), lower)) fail(ErrorKind::UnsupportedTermClass, "g has a pole on the range");
}

void check_product(const TelescopingProduct& t, long lower) {
  if (t.g.is_zero() || has_integer_root_from(t.g.num(), lower) || has_integer_root_from(t.g.den(), lower))
    fail(ErrorKind::UnsupportedTermClass, "g must be free of zeros and poles on the range");
  if (t.term != shift_one(t.g) / t.g)
    fail(ErrorKind::UnsupportedTermClass, "term is not g(i+1)/g(i) for g = " + t.g.to_string());
}

}  // namespace

HyperRational hyperfinite_sum(const ClosedFormSum& a, const HyperRational& upper, long lower) {
  check_upper(upper, lower);
  if (const auto* p = std::get_if<PolySum>(&a)) {
    // sum_{i=lower}^{upper} i^m = S_m(upper) - S_m(lower - 1) as a polynomial identity
    HyperRational total;
    const auto& c = p->term.coeffs();
    for (std::size_t m = 0; m < c.size(); ++m) {
      if (c[m].is_zero()) continue;
      const Poly& s = power_sum(static_cast<unsigned>(m));
      total += HyperRational(c[m]) * (eval_at(s, upper) - HyperRational(s.eval(Rational(lower - 1))));
    }
    return total;
  }
  const auto& t = std::get<TelescopingSum>(a);
  check_telescoping(t, lower);
  return HyperRational(t.g.eval(Rational(lower))) - eval_at(t.g, upper + HyperRational(1));
}

Rational direct_sum(const ClosedFormSum& a, long upper, long lower) {
  Rational total;
  for (long i = lower; i <= upper; ++i) {
    if (const auto* p = std::get_if<PolySum>(&a))
      total += p->term.eval(Rational(i));
    else
      total += std::get<TelescopingSum>(a).term.eval(Rational(i));
  }
  return total;
}

HyperRational hyperfinite_product(const TelescopingProduct& a, const HyperRational& upper, long lower) {
  check_upper(upper, lower);
  check_product(a, lower);
  return eval_at(a.g, upper + HyperRational(1)) / HyperRational(a.g.eval(Rational(lower)));
}

Rational direct_product(const TelescopingProduct& a, long upper, long lower) {
  Rational total(1);
  for (long i = lower; i <= upper; ++i) total *= a.term.eval(Rational(i));
  return total;
}

// ---------------------------------------------------------------- permanence

std::string_view permanence_mode_name(PermanenceMode m) {
  switch (m) {
    case PermanenceMode::Overflow: return "overflow";
    case PermanenceMode::Underflow: return "underflow";
    case PermanenceMode::LocalOverflow: return "local-overflow";
  }
  return "?";
}

namespace {

bool in_union(const std::vector<HInterval>& a, const HyperRational& x) {
  return std::any_of(a.begin(), a.end(), [&](const HInterval& h) { return h.contains(x); });
}

bool positive_infinite(const HyperRational& x) { return x.sign() > 0 && infinite(x); }

// Least natural number in h, for h whose lower end is not positive infinite.
std::optional<long> least_natural(const HInterval& h) {
  long c = 0;
  if (h.lo && h.lo->sign() > 0) c = static_cast<long>(standard_part(*h.lo).floor().get_si());
  for (long k = std::max(0L, c - 1); k <= c + 2; ++k)
    if (h.contains(HyperRational(k))) return k;
  return std::nullopt;
}

PermanenceResult overflow(const std::vector<HInterval>& a, const std::vector<HyperRational>& extra) {
  // N is covered iff some part holds a tail of N and the naturals below it lie in A
  std::optional<long> start;
  for (const auto& h : a) {
    bool high = !h.hi || positive_infinite(*h.hi);
    bool low = !h.lo || !positive_infinite(*h.lo);
    if (!high || !low) continue;
    if (auto k = least_natural(h); k && (!start || *k < *start)) start = k;
  }
  if (!start) fail(ErrorKind::PreconditionFailed, "A does not contain a tail of N");
  for (long k = 0; k < *start; ++k)
    if (!in_union(a, HyperRational(k))) fail(ErrorKind::PreconditionFailed, std::to_string(k) + " is not in A");

  const HyperRational w = HyperRational::omega();
  std::vector<HyperRational> cands;
  for (const auto& h : a) {
    if (h.hi) cands.push_back(h.hi_open ? *h.hi - HyperRational(1) : *h.hi);
    if (h.lo) cands.push_back(h.lo_open ? *h.lo + HyperRational(1) : *h.lo);
  }
  cands.push_back(w);
  for (long c = 1; c <= 3; ++c) cands.push_back(w - HyperRational(c));
  for (long c = 1; c <= 3; ++c)
    for (long d = -2; d <= 2; ++d) cands.push_back(HyperRational(c) * w + HyperRational(d));
  cands.insert(cands.end(), extra.begin(), extra.end());
  for (const auto& x : cands)
    if (x.integer_certified() && positive_infinite(x) && in_union(a, x)) return {x, "certified infinite integer in A"};
  return {std::nullopt, "no certified infinite integer of A among the candidates"};
}

PermanenceResult underflow(const std::vector<HInterval>& a) {
  const HInterval* top = nullptr;
  for (const auto& h : a)
    if (!h.hi) top = &h;
  if (!top) fail(ErrorKind::PreconditionFailed, "A is bounded above, so it misses large infinite integers");
  // walk down through parts that chain below the unbounded one
  HyperRational cur;
  bool cur_open = false, unbounded_below = !top->lo;
  if (top->lo) {
    cur = *top->lo;
    cur_open = top->lo_open;
  }
  for (std::size_t guard = 0; !unbounded_below && positive_infinite(cur) && guard <= a.size(); ++guard) {
    const HInterval* next = nullptr;
    for (const auto& h : a) {
      bool reaches = !h.hi || *h.hi > cur || (*h.hi == cur && (!h.hi_open || !cur_open));
      bool below = !h.lo || *h.lo < cur;
      if (reaches && below) next = &h;
    }
    if (!next) return {std::nullopt, "could not certify that A contains every infinite integer"};
    if (!next->lo) unbounded_below = true;
    else {
      cur = *next->lo;
      cur_open = next->lo_open;
    }
  }
  long k = 0;
  if (!unbounded_below) {
    HInterval tail{cur, std::nullopt, cur_open, true};
    auto least = least_natural(tail);
    if (!least) return {std::nullopt, "no standard starting point found"};
    k = *least;
  }
  while (k > 0 && in_union(a, HyperRational(k - 1))) --k;
  return {HyperRational(k), "every natural from this point on lies in A"};
}

PermanenceResult local_overflow(const std::vector<HInterval>& a) {
  const HyperRational eps = HyperRational::epsilon();
  for (const auto& probe : {HyperRational(0), eps, -eps, eps * eps, -(eps * eps), HyperRational::omega_pow(Rational(-1, 2)),
                            -HyperRational::omega_pow(Rational(-1, 2))})
    if (!in_union(a, probe)) fail(ErrorKind::PreconditionFailed, probe.to_string() + " is an infinitesimal outside A");
  auto appreciable = [](const std::optional<HyperRational>& e, int side) {
    return !e || (e->sign() == side && !infinitesimal(*e));
  };
  std::optional<Rational> left, right;
  for (const auto& h : a) {
    // h covers (-d, 0] or [0, d) for a standard d > 0
    if (appreciable(h.lo, -1) && h.contains(HyperRational(0))) {
      Rational d = h.lo ? -standard_part(*h.lo) : Rational(1);
      if (!left || d > *left) left = d;
    }
    if (appreciable(h.hi, 1) && h.contains(HyperRational(0))) {
      Rational d = h.hi ? standard_part(*h.hi) : Rational(1);
      if (!right || d > *right) right = d;
    }
  }
  if (!left || !right) return {std::nullopt, "could not find a standard neighbourhood of 0 inside A"};
  Rational r = std::min(*left, *right);
  // an endpoint may sit infinitely close to +-r on the wrong side
  if (!in_union(a, HyperRational(r)) || !in_union(a, HyperRational(-r))) r = r / Rational(2);
  return {HyperRational(r), "[-r, r] lies in A"};
}

}  // namespace

PermanenceResult overflow_witness(const std::vector<HInterval>& a, PermanenceMode mode, const std::vector<HyperRational>& extra) {
  switch (mode) {
    case PermanenceMode::Overflow: return overflow(a, extra);
    case PermanenceMode::Underflow: return underflow(a);
    case PermanenceMode::LocalOverflow: return local_overflow(a);
  }
  return {};
}

HyperRational eval_piece(const std::vector<HyperRational>& piece, const HyperRational& n) {
  HyperRational acc;
  for (std::size_t j = piece.size(); j-- > 0;) acc = acc * n + piece[j];
  return acc;
}

HyperRational robinson_witness(const HyperSequence& s) {
  if (s.pieces.size() != s.modulus || s.modulus == 0) fail(ErrorKind::InvalidArgument, "one piece per residue class");
  std::optional<Rational> t;
  for (std::size_t r = 0; r < s.pieces.size(); ++r)
    for (std::size_t j = 0; j < s.pieces[r].size(); ++j) {
      const auto& c = s.pieces[r][j];
      if (c.is_zero()) continue;
      // a coefficient with nonzero standard part makes s_n appreciable for some standard n of the class
      if (!infinitesimal(c))
        fail(ErrorKind::NotPointwiseInfinitesimal, "coefficient of n^" + std::to_string(j) + " in class " +
                                                       std::to_string(r) + " is " + c.to_string());
      if (j == 0) continue;
      // c * w^(t j) stays infinitesimal when deg c + t j < 0
      Rational bound = -w_degree(c) / Rational(static_cast<long>(j + 1));
      if (!t || bound < *t) t = bound;
    }
  HyperRational nu = HyperRational::omega_pow(t.value_or(Rational(1)));
  if (!infinite(nu)) fail(ErrorKind::InvalidArgument, "witness exponent is not positive");
  for (const auto& p : s.pieces)
    if (!infinitesimal(eval_piece(p, nu)) && !eval_piece(p, nu).is_zero())
      fail(ErrorKind::NotPointwiseInfinitesimal, "s at the witness is not infinitesimal");
  return nu;
}

}  // namespace nsa::calc
