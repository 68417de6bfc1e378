#include <algorithm>
#include <numeric>

#include "nsa/ultrapower_seq.hpp"

namespace nsa::seq {

namespace {

Rational index(std::uint64_t i) { return Rational(Integer(static_cast<unsigned long>(i))); }

// Eventual truth of "s_i is on the right side of the endpoint" for one class.
bool lo_ok(const RatFunc& p, const std::optional<RatFunc>& lo, bool open) {
  if (!lo) return true;
  int e = (p - *lo).eventual_sign();
  return e > 0 || (e == 0 && !open);
}

bool hi_ok(const RatFunc& p, const std::optional<RatFunc>& hi, bool open) {
  if (!hi) return true;
  int e = (*hi - p).eventual_sign();
  return e > 0 || (e == 0 && !open);
}

template <class Pred>
bool decide_classes(std::uint64_t L, UltrafilterOracle& oracle, Pred pred) {
  std::vector<std::uint64_t> res;
  for (std::uint64_t k = 0; k < L; ++k)
    if (pred(k)) res.push_back(k);
  return oracle.contains(EPSet::periodic(L, res));
}

struct SymInterval {
  std::optional<RatFunc> lo, hi;
  bool lo_open = false, hi_open = false;
};

// Eventual intersection of two symbolic intervals.
SymInterval meet(const SymInterval& a, const SymInterval& b) {
  SymInterval r = a;
  if (b.lo) {
    if (!r.lo) {
      r.lo = b.lo;
      r.lo_open = b.lo_open;
    } else {
      int e = (*b.lo - *r.lo).eventual_sign();
      if (e > 0) {
        r.lo = b.lo;
        r.lo_open = b.lo_open;
      } else if (e == 0) {
        r.lo_open = r.lo_open || b.lo_open;
      }
    }
  }
  if (b.hi) {
    if (!r.hi) {
      r.hi = b.hi;
      r.hi_open = b.hi_open;
    } else {
      int e = (*b.hi - *r.hi).eventual_sign();
      if (e < 0) {
        r.hi = b.hi;
        r.hi_open = b.hi_open;
      } else if (e == 0) {
        r.hi_open = r.hi_open || b.hi_open;
      }
    }
  }
  return r;
}

RatFunc symbolic_point(const SymInterval& iv) {
  if (iv.lo && iv.hi) return (*iv.lo + *iv.hi) * RatFunc(Rational(1, 2));
  if (iv.lo) return *iv.lo + RatFunc(1);
  if (iv.hi) return *iv.hi - RatFunc(1);
  return RatFunc(0);
}

RInterval intersect(const RInterval& a, const RInterval& b) {
  RInterval r = a;
  if (b.lo && (!r.lo || *b.lo > *r.lo || (*b.lo == *r.lo && b.lo_open))) {
    r.lo = b.lo;
    r.lo_open = b.lo_open || (a.lo && *a.lo == *b.lo && a.lo_open);
  }
  if (b.hi && (!r.hi || *b.hi < *r.hi || (*b.hi == *r.hi && b.hi_open))) {
    r.hi = b.hi;
    r.hi_open = b.hi_open || (a.hi && *a.hi == *b.hi && a.hi_open);
  }
  return r;
}

}  // namespace

InternalSetDesc InternalSetDesc::uniform(const InternalInterval& iv) {
  InternalSetDesc d;
  d.classes = {iv};
  return d;
}

RInterval InternalSetDesc::at(std::uint64_t i) const {
  auto it = exceptions.find(i);
  if (it != exceptions.end()) return it->second;
  const InternalInterval& iv = classes.at(i % modulus);
  RInterval r;
  r.lo_open = iv.lo_open;
  r.hi_open = iv.hi_open;
  Rational x = index(i);
  if ((iv.lo && iv.lo->has_pole_at(x)) || (iv.hi && iv.hi->has_pole_at(x))) return RInterval::open(0, 0);
  if (iv.lo) r.lo = iv.lo->eval(x);
  if (iv.hi) r.hi = iv.hi->eval(x);
  return r;
}

bool internal_membership(const InternalSetDesc& a, const SequenceReal& s, UltrafilterOracle& oracle) {
  std::uint64_t L = std::lcm(a.modulus, s.modulus);
  return decide_classes(L, oracle, [&](std::uint64_t k) {
    const InternalInterval& iv = a.classes.at(k % a.modulus);
    const RatFunc& p = s.piece(k);
    return lo_ok(p, iv.lo, iv.lo_open) && hi_ok(p, iv.hi, iv.hi_open);
  });
}

bool nonvoid_ae(const InternalSetDesc& a, UltrafilterOracle& oracle) {
  return decide_classes(a.modulus, oracle, [&](std::uint64_t k) {
    const InternalInterval& iv = a.classes[k];
    if (!iv.lo || !iv.hi) return true;
    int e = (*iv.hi - *iv.lo).eventual_sign();
    return e > 0 || (e == 0 && !iv.lo_open && !iv.hi_open);
  });
}

bool subset_ae(const InternalSetDesc& b, const InternalSetDesc& a, UltrafilterOracle& oracle) {
  std::uint64_t L = std::lcm(a.modulus, b.modulus);
  return decide_classes(L, oracle, [&](std::uint64_t k) {
    const InternalInterval& x = b.classes[k % b.modulus];
    const InternalInterval& y = a.classes[k % a.modulus];
    bool lo = true, hi = true;
    if (y.lo) {
      if (!x.lo) {
        lo = false;
      } else {
        int e = (*x.lo - *y.lo).eventual_sign();
        lo = e > 0 || (e == 0 && (x.lo_open || !y.lo_open));
      }
    }
    if (y.hi) {
      if (!x.hi) {
        hi = false;
      } else {
        int e = (*y.hi - *x.hi).eventual_sign();
        hi = e > 0 || (e == 0 && (x.hi_open || !y.hi_open));
      }
    }
    return lo && hi;
  });
}

RatFunc BiRatFunc::at_level(const Rational& n) const {
  std::vector<RatFunc> xs{RatFunc(n), RatFunc::n()};
  return num.eval<RatFunc>(std::span<const RatFunc>(xs)) / den.eval<RatFunc>(std::span<const RatFunc>(xs));
}

RatFunc BiRatFunc::diagonal() const {
  std::vector<RatFunc> xs{RatFunc::n(), RatFunc::n()};
  return num.eval<RatFunc>(std::span<const RatFunc>(xs)) / den.eval<RatFunc>(std::span<const RatFunc>(xs));
}

InternalSetDesc Chain::level(std::uint64_t n) const {
  if (n < levels.size()) return levels[n];
  if (!rule) {
    if (levels.empty()) fail(ErrorKind::InvalidArgument, "empty chain");
    return levels.back();
  }
  InternalInterval iv;
  iv.lo_open = rule->lo_open;
  iv.hi_open = rule->hi_open;
  if (rule->lo) iv.lo = rule->lo->at_level(index(n));
  if (rule->hi) iv.hi = rule->hi->at_level(index(n));
  return InternalSetDesc::uniform(iv);
}

Rational choose_point(const RInterval& iv) {
  if (iv.lo && iv.hi) return (*iv.lo + *iv.hi) / 2;
  if (iv.lo) return *iv.lo + 1;
  if (iv.hi) return *iv.hi - 1;
  return 0;
}

SequenceReal saturation_witness(const Chain& chain, UltrafilterOracle& oracle, std::uint64_t depth) {
  for (std::uint64_t n = 0; n <= depth; ++n) {
    if (!nonvoid_ae(chain.level(n), oracle)) fail(ErrorKind::EmptyChainLevel, "level " + std::to_string(n));
    if (n < depth && !subset_ae(chain.level(n + 1), chain.level(n), oracle))
      fail(ErrorKind::NotDecreasing, "level " + std::to_string(n + 1) + " not inside level " + std::to_string(n));
  }

  // s_i from the proof: m_i = max{m <= i : A_{0,i} ∩ ... ∩ A_{m,i} nonempty}
  auto exact_point = [&](std::uint64_t i) -> Rational {
    RInterval acc = chain.level(0).at(i);
    if (acc.empty()) return 0;
    for (std::uint64_t m = 1; m <= i; ++m) {
      RInterval next = intersect(acc, chain.level(m).at(i));
      if (next.empty()) break;
      acc = next;
      if (!chain.rule && m + 1 >= chain.levels.size()) break;  // constant tail
    }
    return choose_point(acc);
  };

  // eventual point per class: intersection of the explicit levels and the diagonal of the rule
  std::uint64_t L = 1;
  for (const auto& lv : chain.levels) L = std::lcm(L, lv.modulus);
  SequenceReal s;
  s.modulus = L;
  for (std::uint64_t k = 0; k < L; ++k) {
    SymInterval acc;
    for (const auto& lv : chain.levels) {
      const InternalInterval& iv = lv.classes[k % lv.modulus];
      acc = meet(acc, SymInterval{iv.lo, iv.hi, iv.lo_open, iv.hi_open});
    }
    if (chain.rule) {
      SymInterval diag;
      diag.lo_open = chain.rule->lo_open;
      diag.hi_open = chain.rule->hi_open;
      if (chain.rule->lo) diag.lo = chain.rule->lo->diagonal();
      if (chain.rule->hi) diag.hi = chain.rule->hi->diagonal();
      acc = meet(acc, diag);
    }
    s.pieces.push_back(symbolic_point(acc));
  }

  // below T the exact construction is stored as exceptions; T is pushed up until
  // the closed form agrees with the construction on a full window
  constexpr std::uint64_t kWindow = 64;
  constexpr std::uint64_t kLimit = 4096;
  std::uint64_t T = std::max<std::uint64_t>(chain.levels.size(), 1);
  for (;; T += kWindow) {
    if (T > kLimit) fail(ErrorKind::PreconditionFailed, "diagonal construction does not stabilise");
    bool agree = true;
    for (std::uint64_t i = T; i < T + kWindow && agree; ++i) {
      const RatFunc& p = s.piece(i);
      agree = !p.has_pole_at(index(i)) && p.eval(index(i)) == exact_point(i);
    }
    if (agree) break;
  }
  for (std::uint64_t i = 0; i < T; ++i) s.exceptions[i] = exact_point(i);
  for (std::uint64_t k = 0; k < L; ++k)
    for (const auto& r : integer_roots_from(s.pieces[k].den(), Integer(static_cast<unsigned long>(T))))
      if (r.get_ui() % L == k) s.exceptions[r.get_ui()] = exact_point(r.get_ui());

  for (std::uint64_t n = 0; n <= depth; ++n)
    if (!internal_membership(chain.level(n), s, oracle))
      fail(ErrorKind::PreconditionFailed, "witness misses level " + std::to_string(n));
  return s;
}

}  // namespace nsa::seq
