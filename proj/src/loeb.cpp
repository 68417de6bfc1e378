#include "nsa/loeb.hpp"

#include <algorithm>
#include <iterator>

namespace nsa::loeb {

namespace {

// Cell index j with b_j < x < b_{j+1}, or the break index when x is a breakpoint.
struct Locate {
  std::size_t index;
  bool at_break;
};

Locate locate(const std::vector<Rational>& b, const Rational& x) {
  auto it = std::lower_bound(b.begin(), b.end(), x);
  auto i = static_cast<std::size_t>(it - b.begin());
  if (it != b.end() && *it == x) return {i, true};
  return {i - 1, false};
}

bool all_coeffs_nonneg(const Poly& p) {
  return std::all_of(p.coeffs().begin(), p.coeffs().end(), [](const Rational& c) { return c.sign() >= 0; });
}

// Some point of (a, b) where p does not vanish (p nonzero).
Rational nonroot_in(const Poly& p, const Rational& a, const Rational& b) {
  for (long q = 2;; ++q)
    for (long k = 1; k < q; ++k) {
      Rational x = a + (b - a) * Rational(k) / Rational(q);
      if (!p.eval(x).is_zero()) return x;
    }
}

}  // namespace

// ---------------------------------------------------------------- SymFunc

SymFunc::SymFunc(const Poly& p) : breaks_{0, 1}, pieces_{p}, values_{p.eval(0), p.eval(1)} {}

SymFunc::SymFunc(std::vector<Rational> breaks, std::vector<Poly> pieces, std::vector<Rational> values)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)), values_(std::move(values)) {
  if (breaks_.size() < 2 || breaks_.front() != Rational(0) || breaks_.back() != Rational(1))
    fail(ErrorKind::InvalidArgument, "breakpoints must run from 0 to 1");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i - 1] < breaks_[i])) fail(ErrorKind::InvalidArgument, "breakpoints must increase strictly");
  if (pieces_.size() + 1 != breaks_.size() || values_.size() != breaks_.size())
    fail(ErrorKind::InvalidArgument, "need one piece per cell and one value per breakpoint");
  canonicalize();
}

SymFunc SymFunc::piecewise(std::vector<Rational> breaks, std::vector<Poly> pieces) {
  if (pieces.empty() || pieces.size() + 1 != breaks.size()) fail(ErrorKind::InvalidArgument, "need one piece per cell");
  std::vector<Rational> values;
  for (std::size_t i = 0; i < pieces.size(); ++i) values.push_back(pieces[i].eval(breaks[i]));
  values.push_back(pieces.back().eval(breaks.back()));
  return SymFunc(std::move(breaks), std::move(pieces), std::move(values));
}

SymFunc SymFunc::indicator(const IntervalUnion& a) {
  std::vector<Rational> b{0, 1};
  for (const auto& r : a) {
    if (r.empty()) continue;
    if (!r.lo || !r.hi || *r.lo < Rational(0) || *r.hi > Rational(1))
      fail(ErrorKind::InvalidArgument, "set must lie inside [0,1]");
    b.push_back(*r.lo);
    b.push_back(*r.hi);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::vector<Poly> pieces;
  std::vector<Rational> values;
  for (std::size_t i = 0; i < b.size(); ++i) {
    values.emplace_back(seq::contains(a, b[i]) ? 1 : 0);
    if (i + 1 < b.size()) pieces.emplace_back(seq::contains(a, (b[i] + b[i + 1]) / Rational(2)) ? 1 : 0);
  }
  return SymFunc(std::move(b), std::move(pieces), std::move(values));
}

void SymFunc::canonicalize() {
  std::vector<Rational> b{breaks_[0]};
  std::vector<Poly> p{pieces_[0]};
  std::vector<Rational> v{values_[0]};
  for (std::size_t i = 1; i < breaks_.size(); ++i) {
    bool redundant = i + 1 < breaks_.size() && pieces_[i] == p.back() && values_[i] == p.back().eval(breaks_[i]);
    if (redundant) continue;
    b.push_back(breaks_[i]);
    v.push_back(values_[i]);
    if (i < pieces_.size()) p.push_back(pieces_[i]);
  }
  breaks_ = std::move(b);
  pieces_ = std::move(p);
  values_ = std::move(v);
}

Rational SymFunc::eval(const Rational& x) const {
  if (x < Rational(0) || x > Rational(1)) fail(ErrorKind::InvalidArgument, "outside [0,1]: " + x.to_string());
  auto l = locate(breaks_, x);
  return l.at_break ? values_[l.index] : pieces_[l.index].eval(x);
}

SymFunc SymFunc::refined(const std::vector<Rational>& nb) const {
  for (const auto& b : breaks_)
    if (!std::binary_search(nb.begin(), nb.end(), b)) fail(ErrorKind::InvalidArgument, "refinement drops a breakpoint");
  SymFunc out;
  out.breaks_ = nb;
  out.pieces_.clear();
  out.values_.clear();
  for (std::size_t i = 0; i < nb.size(); ++i) {
    out.values_.push_back(eval(nb[i]));
    if (i + 1 < nb.size()) out.pieces_.push_back(pieces_[locate(breaks_, (nb[i] + nb[i + 1]) / Rational(2)).index]);
  }
  return out;
}

int SymFunc::degree() const {
  int d = -1;
  for (const auto& p : pieces_) d = std::max(d, p.degree());
  return d;
}

bool SymFunc::nonnegative() const {
  if (std::any_of(values_.begin(), values_.end(), [](const Rational& v) { return v.sign() < 0; })) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    // cells lie in [0,1], so nonnegative coefficients settle it without a Sturm count
    if (all_coeffs_nonneg(pieces_[i])) continue;
    if (!nonnegative_on(pieces_[i], breaks_[i], breaks_[i + 1])) return false;
  }
  return true;
}

std::vector<Rational> common_breaks(const SymFunc& a, const SymFunc& b) {
  std::vector<Rational> out;
  std::set_union(a.breaks().begin(), a.breaks().end(), b.breaks().begin(), b.breaks().end(), std::back_inserter(out));
  return out;
}

namespace {

template <class Op>
SymFunc combine(const SymFunc& a, const SymFunc& b, Op op) {
  auto cb = common_breaks(a, b);
  SymFunc ra = a.refined(cb), rb = b.refined(cb);
  std::vector<Poly> p;
  std::vector<Rational> v;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    v.push_back(op(ra.values()[i], rb.values()[i]));
    if (i + 1 < cb.size()) p.push_back(op(ra.pieces()[i], rb.pieces()[i]));
  }
  return SymFunc(std::move(cb), std::move(p), std::move(v));
}

}  // namespace

SymFunc operator+(const SymFunc& a, const SymFunc& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}
SymFunc operator-(const SymFunc& a, const SymFunc& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}
SymFunc operator*(const SymFunc& a, const SymFunc& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}
SymFunc SymFunc::operator-() const { return SymFunc(0) - *this; }

std::string SymFunc::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    s += "f(" + breaks_[i].to_string() + ")=" + values_[i].to_string();
    if (i < pieces_.size())
      s += "; (" + breaks_[i].to_string() + "," + breaks_[i + 1].to_string() + "): " + pieces_[i].to_string() + "; ";
  }
  return s;
}

// ---------------------------------------------------------------- lattice

SymFunc max(const SymFunc& f, const SymFunc& g) {
  auto cb = common_breaks(f, g);
  SymFunc rf = f.refined(cb), rg = g.refined(cb);
  std::vector<Rational> nb{cb[0]}, nv{std::max(rf.values()[0], rg.values()[0])};
  std::vector<Poly> np;
  for (std::size_t i = 0; i + 1 < cb.size(); ++i) {
    const Poly &pf = rf.pieces()[i], &pg = rg.pieces()[i];
    Poly d = pf - pg;
    std::vector<Rational> cuts;
    if (!d.is_zero()) {
      Poly odd = odd_multiplicity_part(d);
      for (const auto& r : rational_roots(odd))
        if (cb[i] < r && r < cb[i + 1]) cuts.push_back(r);
      if (count_roots_open(odd, cb[i], cb[i + 1]) != static_cast<int>(cuts.size()))
        fail(ErrorKind::UnsupportedFunctionClass, "f - g changes sign at an irrational point");
    }
    Rational lo = cb[i];
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
      Rational hi = k < cuts.size() ? cuts[k] : cb[i + 1];
      bool take_f = d.is_zero() || d.eval(nonroot_in(d, lo, hi)).sign() > 0;
      np.push_back(take_f ? pf : pg);
      nb.push_back(hi);
      nv.push_back(k < cuts.size() ? pf.eval(hi) : std::max(rf.values()[i + 1], rg.values()[i + 1]));
      lo = hi;
    }
  }
  return SymFunc(std::move(nb), std::move(np), std::move(nv));
}

SymFunc min(const SymFunc& f, const SymFunc& g) { return -max(-f, -g); }
SymFunc abs(const SymFunc& f) { return max(f, -f); }
SymFunc pos_part(const SymFunc& f) { return max(f, SymFunc(0)); }
SymFunc neg_part(const SymFunc& f) { return max(-f, SymFunc(0)); }

// ---------------------------------------------------------------- HyperFunc

HyperFunc operator+(const HyperFunc& a, const HyperFunc& b) {
  HyperFunc out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

HyperFunc operator*(const SymFunc& h, const HyperFunc& g) {
  HyperFunc out;
  for (const auto& [s, f] : g.terms) out.terms.emplace_back(s, h * f);
  return out;
}

// ---------------------------------------------------------------- integration

namespace {

Integer break_lcm(const SymFunc& f) {
  Integer q = 1;
  for (const auto& b : f.breaks()) q = lcm(q, b.den());
  return q;
}

// N^D * sum_{l<N} f(l/N) as a polynomial T in N, so that I f = T(N) / N^(D+1).
// A cell (a, b) holds l = aN+1 .. bN-1, which is S_m(bN-1) - S_m(aN) for l^m.
struct GridSum {
  Poly t;
  long d;
};

GridSum grid_sum(const SymFunc& f) {
  long d = std::max(0, f.degree());
  Poly t;
  const auto& b = f.breaks();
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    t += Poly::monomial(f.values()[i], static_cast<std::size_t>(d));
    const auto& c = f.pieces()[i].coeffs();
    for (std::size_t m = 0; m < c.size(); ++m) {
      if (c[m].is_zero()) continue;
      const Poly& s = power_sum(static_cast<unsigned>(m));
      Poly cell = s.compose_linear(b[i + 1], -1) - s.compose_linear(b[i], 0);
      t += cell * Poly::monomial(c[m], static_cast<std::size_t>(d) - m);
    }
  }
  return {t, d};
}

void check_grid(const Grid& g, const SymFunc& f) {
  if (!g.size.integer_certified() || g.size.sign() <= 0)
    fail(ErrorKind::UnsupportedFunctionClass, "grid size must be a positive certified integer: " + g.size.to_string());
  for (const auto& b : f.breaks())
    if (!(HyperRational(b) * g.size).integer_certified())
      fail(ErrorKind::UnsupportedFunctionClass, "breakpoint " + b.to_string() + " is not a grid point");
}

}  // namespace

Grid Grid::for_function(const SymFunc& f, long power) {
  return {HyperRational(Rational(break_lcm(f))) * HyperRational::omega_pow(Rational(power))};
}

Grid Grid::for_function(const HyperFunc& f, long power) {
  Integer q = 1;
  for (const auto& t : f.terms) q = lcm(q, break_lcm(t.second));
  return {HyperRational(Rational(q)) * HyperRational::omega_pow(Rational(power))};
}

HyperRational internal_integral(const Grid& g, const SymFunc& f) {
  check_grid(g, f);
  auto [t, d] = grid_sum(f);
  return t.eval_in(g.size) / g.size.pow(d + 1);
}

HyperRational internal_integral(const Grid& g, const HyperFunc& f) {
  HyperRational total;
  for (const auto& [s, fn] : f.terms) total += s * internal_integral(g, fn);
  return total;
}

HyperRational internal_integral_right(const Grid& g, const SymFunc& f) {
  return internal_integral(g, f) + HyperRational(f.values().back() - f.values().front()) / g.size;
}

Rational direct_grid_sum(const SymFunc& f, long n) {
  if (n <= 0) fail(ErrorKind::InvalidArgument, "grid size must be positive");
  Rational total;
  for (long l = 0; l < n; ++l) total += f.eval(Rational(l) / Rational(n));
  return total / Rational(n);
}

Rational standardize(const SymFunc& f) {
  // T(N) / N^(D+1) = t_{D+1} + O(1/N) for infinite N
  auto [t, d] = grid_sum(f);
  return t.coeff(static_cast<std::size_t>(d + 1));
}

Rational standardize(const HyperFunc& f, const Grid& g) {
  auto v = internal_integral(g, f);
  auto c = classify(v);
  if (!c.st) fail(ErrorKind::InfiniteIntegral, v.to_string());
  return *c.st;
}

Rational standardize(const HyperFunc& f) { return standardize(f, Grid::for_function(f)); }

bool is_null(const HyperFunc& g) {
  // merge equal scales, drop vanishing terms
  std::vector<std::pair<HyperRational, SymFunc>> terms;
  for (const auto& [s, f] : g.terms) {
    auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& t) { return t.first == s; });
    if (it != terms.end())
      it->second = it->second + f;
    else
      terms.emplace_back(s, f);
  }
  for (;;) {
    std::erase_if(terms, [](const auto& t) {
      return t.first.is_zero() || t.second.is_zero() || classify(t.first).kind == Magnitude::Infinitesimal;
    });
    // what is left has infinitesimal scale times bounded functions: |g| has such a majorant
    if (terms.empty()) return true;
    Rational e = terms[0].first.num().degree() - terms[0].first.den().degree();
    for (const auto& t : terms) e = std::max(e, t.first.num().degree() - t.first.den().degree());
    HyperRational top = HyperRational::omega_pow(e);
    SymFunc h;
    std::vector<Rational> lead(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k) {
      auto st = classify(terms[k].first / top).st;
      lead[k] = st ? *st : Rational(0);
      h = h + SymFunc(lead[k]) * terms[k].second;
    }
    // lower-order parts are o(w^e) times bounded functions
    if (standardize(abs(h)).sign() > 0) return false;
    if (e.sign() <= 0) return true;
    if (!h.is_zero()) fail(ErrorKind::UnsupportedFunctionClass, "infinite terms cancel except at finitely many points");
    for (std::size_t k = 0; k < terms.size(); ++k) terms[k].first -= HyperRational(lead[k]) * top;
  }
}

Rational sup_bound(const SymFunc& f) {
  Rational b;
  for (const auto& v : f.values()) b = std::max(b, v.abs());
  for (const auto& p : f.pieces()) {
    Rational s;
    for (const auto& c : p.coeffs()) s += c.abs();
    b = std::max(b, s);
  }
  return b;
}

SandwichResult sandwich_check(const SymFunc& f, const Rational& eps) {
  if (eps.sign() <= 0) fail(ErrorKind::InvalidArgument, "eps must be positive");
  SandwichResult r;
  r.alpha = f - SymFunc(eps / Rational(2));
  r.beta = f + SymFunc(eps / Rational(2));
  Grid g = Grid::for_function(f);
  bool ordered = (f - r.alpha).nonnegative() && (r.beta - f).nonnegative();
  // |alpha| <= B pointwise gives I|alpha| <= B, finite
  r.alpha_bound = sup_bound(r.alpha);
  bool alpha_finite = (SymFunc(r.alpha_bound) - r.alpha).nonnegative() && (SymFunc(r.alpha_bound) + r.alpha).nonnegative();
  bool width = internal_integral(g, r.beta - r.alpha) <= HyperRational(eps);
  r.lower = standardize(r.alpha);
  r.upper = r.lower + eps;
  r.value = standardize(f);
  r.verdict = ordered && alpha_finite && width && r.lower <= r.value && r.value <= r.upper;
  return r;
}

MctReport monotone_convergence_check(const std::function<SymFunc(unsigned)>& seq, const SymFunc& f, unsigned depth,
                                     const Rational& tail_bound) {
  if (depth == 0) fail(ErrorKind::InvalidArgument, "depth must be positive");
  MctReport r;
  SymFunc prev = seq(1);
  r.values.push_back(standardize(prev));
  for (unsigned n = 2; n <= depth; ++n) {
    SymFunc cur = seq(n);
    if (!(cur - prev).nonnegative()) fail(ErrorKind::NotMonotone, "f_" + std::to_string(n) + " < f_" + std::to_string(n - 1) + " somewhere");
    r.values.push_back(standardize(cur));
    prev = std::move(cur);
  }
  if (!(f - prev).nonnegative()) fail(ErrorKind::NotMonotone, "the limit lies below f_" + std::to_string(depth) + " somewhere");
  r.limit_value = standardize(f);
  r.gap = r.limit_value - r.values.back();
  r.increasing = std::is_sorted(r.values.begin(), r.values.end());
  r.bounded = std::all_of(r.values.begin(), r.values.end(), [&](const Rational& v) { return v <= r.limit_value; });
  r.within_tail = r.gap.sign() >= 0 && r.gap <= tail_bound;
  return r;
}

SymFunc geometric_partial(unsigned n) {
  std::vector<Rational> c(n + 1);
  for (unsigned j = 1; j <= n; ++j) c[j] = Rational(1) / pow(Rational(2), static_cast<long>(j));
  return SymFunc(Poly(c));
}

MctReport geometric_demo(unsigned depth) {
  return monotone_convergence_check(geometric_partial, geometric_partial(64), depth,
                                    Rational(1) / pow(Rational(2), static_cast<long>(depth)));
}

Rational loeb_measure(const IntervalUnion& a) { return standardize(SymFunc::indicator(a)); }

}  // namespace nsa::loeb
