#include "nsa/json_io.hpp"

#include <fstream>
#include <sstream>

namespace nsa::io {

namespace {

std::uint64_t index_of(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    fail(ErrorKind::ParseError, "expected a nonnegative integer, got " + j.dump());
  return j.get<std::uint64_t>();
}

std::vector<std::uint64_t> indices_of(const Json& j) {
  std::vector<std::uint64_t> out;
  if (j.is_null()) return out;
  for (const auto& x : j) out.push_back(index_of(x));
  return out;
}

Poly poly_of(const Json& j) {
  std::vector<Rational> c;
  for (const auto& x : j) c.push_back(rational_of(x));
  return Poly(std::move(c));
}

Json poly_json(const Poly& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(c.to_string());
  return out;
}

seq::RatFunc ratfunc_of(const Json& j) {
  if (j.is_array()) return seq::RatFunc(poly_of(j));
  Poly den = j.contains("den") ? poly_of(j.at("den")) : Poly(1);
  return seq::RatFunc(poly_of(j.at("num")), den);
}

MPoly mpoly_of(const Json& j) {
  MPoly p(2);
  for (const auto& t : j) {
    MPoly::Exponents e;
    for (const auto& x : t.at(0)) e.push_back(static_cast<std::uint32_t>(index_of(x)));
    p.add_term(e, rational_of(t.at(1)));
  }
  return p;
}

seq::BiRatFunc birat_of(const Json& j) {
  seq::BiRatFunc f;
  f.num = mpoly_of(j.at("num"));
  if (j.contains("den")) f.den = mpoly_of(j.at("den"));
  return f;
}

bool flag(const Json& j, const char* key) { return j.contains(key) && j.at(key).get<bool>(); }

bool has(const Json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

seq::RInterval interval_of(const Json& j) {
  seq::RInterval iv;
  if (has(j, "lo")) iv.lo = rational_of(j.at("lo"));
  if (has(j, "hi")) iv.hi = rational_of(j.at("hi"));
  iv.lo_open = flag(j, "loOpen");
  iv.hi_open = flag(j, "hiOpen");
  return iv;
}

seq::InternalSetDesc internal_set_of(const Json& j) {
  seq::InternalSetDesc a;
  a.modulus = j.contains("mod") ? index_of(j.at("mod")) : 1;
  for (const auto& c : j.at("classes")) {
    seq::InternalInterval iv;
    if (has(c, "lo")) iv.lo = ratfunc_of(c.at("lo"));
    if (has(c, "hi")) iv.hi = ratfunc_of(c.at("hi"));
    iv.lo_open = flag(c, "loOpen");
    iv.hi_open = flag(c, "hiOpen");
    a.classes.push_back(iv);
  }
  if (a.classes.size() != a.modulus) fail(ErrorKind::ParseError, "internal set: one class per residue expected");
  if (j.contains("exc"))
    for (const auto& e : j.at("exc")) a.exceptions[index_of(e.at(0))] = interval_of(e.at(1));
  return a;
}

}  // namespace

Rational rational_of(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  fail(ErrorKind::ParseError, "expected a rational, got " + j.dump());
}

Json rational_json(const Rational& r) { return r.to_string(); }

Json hyper_json(const HyperRational& x) {
  auto terms = [](const GenPoly& p) {
    Json out = Json::array();
    for (const auto& t : p.terms()) out.push_back(Json::array({t.exp.to_string(), t.coef.to_string()}));
    return out;
  };
  Json j;
  j["num"] = terms(x.num());
  j["den"] = terms(x.den());
  j["int"] = x.integer_certified();
  return j;
}

Json epset_json(const filters::EPSet& s) {
  Json j;
  j["mod"] = s.modulus;
  j["res"] = s.residues;
  j["add"] = s.added;
  j["rem"] = s.removed;
  return j;
}

filters::EPSet epset_of(const Json& j) {
  filters::EPSet s = filters::EPSet::periodic(index_of(j.at("mod")), indices_of(j.value("res", Json())));
  s.added = indices_of(j.value("add", Json()));
  s.removed = indices_of(j.value("rem", Json()));
  filters::validate(s);
  return s;
}

seq::SequenceReal sequence_of(const Json& j) {
  seq::SequenceReal s;
  s.modulus = j.contains("mod") ? index_of(j.at("mod")) : 1;
  if (s.modulus == 0) fail(ErrorKind::ParseError, "sequence modulus must be positive");
  std::vector<std::optional<seq::RatFunc>> pieces(s.modulus);
  for (const auto& p : j.at("pieces")) {
    std::uint64_t r = p.contains("res") ? index_of(p.at("res")) : 0;
    if (r >= s.modulus || pieces[r]) fail(ErrorKind::ParseError, "sequence: bad or repeated residue " + std::to_string(r));
    Poly den = p.contains("den") ? poly_of(p.at("den")) : Poly(1);
    pieces[r] = seq::RatFunc(poly_of(p.at("num")), den);
  }
  for (std::uint64_t r = 0; r < s.modulus; ++r) {
    if (!pieces[r]) fail(ErrorKind::ParseError, "sequence: no piece for residue " + std::to_string(r));
    s.pieces.push_back(*pieces[r]);
  }
  if (j.contains("exc"))
    for (const auto& e : j.at("exc")) s.exceptions[index_of(e.at(0))] = rational_of(e.at(1));
  seq::validate(s);
  return s;
}

Json sequence_json(const seq::SequenceReal& s) {
  Json j;
  j["mod"] = s.modulus;
  j["pieces"] = Json::array();
  for (std::uint64_t r = 0; r < s.modulus; ++r)
    j["pieces"].push_back({{"res", r}, {"num", poly_json(s.pieces[r].num())}, {"den", poly_json(s.pieces[r].den())}});
  j["exc"] = Json::array();
  for (const auto& [n, v] : s.exceptions) j["exc"].push_back(Json::array({n, v.to_string()}));
  return j;
}

seq::IntervalUnion interval_union_of(const Json& j) {
  seq::IntervalUnion a;
  for (const auto& iv : j) a.push_back(interval_of(iv));
  return a;
}

Json interval_union_json(const seq::IntervalUnion& a) {
  Json out = Json::array();
  for (const auto& iv : a) {
    Json j;
    j["lo"] = iv.lo ? Json(iv.lo->to_string()) : Json();
    j["hi"] = iv.hi ? Json(iv.hi->to_string()) : Json();
    j["loOpen"] = iv.lo_open;
    j["hiOpen"] = iv.hi_open;
    out.push_back(j);
  }
  return out;
}

std::vector<HInterval> hyper_intervals_of(const Json& j) {
  auto end = [](const Json& x) {
    if (x.is_string()) return parse_hyper(x.get<std::string>());
    return HyperRational(rational_of(x));
  };
  std::vector<HInterval> out;
  for (const auto& iv : j) {
    HInterval h;
    if (has(iv, "lo")) h.lo = end(iv.at("lo"));
    if (has(iv, "hi")) h.hi = end(iv.at("hi"));
    h.lo_open = flag(iv, "loOpen");
    h.hi_open = flag(iv, "hiOpen");
    out.push_back(h);
  }
  return out;
}

seq::Chain chain_of(const Json& j) {
  seq::Chain c;
  if (j.contains("levels"))
    for (const auto& l : j.at("levels")) c.levels.push_back(internal_set_of(l));
  if (has(j, "rule")) {
    const Json& r = j.at("rule");
    seq::ChainRule rule;
    if (has(r, "lo")) rule.lo = birat_of(r.at("lo"));
    if (has(r, "hi")) rule.hi = birat_of(r.at("hi"));
    rule.lo_open = flag(r, "loOpen");
    rule.hi_open = flag(r, "hiOpen");
    c.rule = rule;
  }
  return c;
}

simple::FiniteSystem system_of(const Json& j) {
  if (j.contains("numeric")) {
    std::vector<Rational> values;
    for (const auto& v : j.at("numeric")) values.push_back(rational_of(v));
    return simple::FiniteSystem::numeric(values);
  }
  simple::FiniteSystem s(j.at("elements").get<std::vector<std::string>>());
  if (j.contains("relations"))
    for (const auto& [name, r] : j.at("relations").items())
      s.add_relation_labels(name, r.at("arity").get<std::size_t>(),
                            r.at("tuples").get<std::vector<std::vector<std::string>>>());
  if (j.contains("functions"))
    for (const auto& [name, f] : j.at("functions").items()) {
      std::vector<std::pair<std::vector<std::string>, std::string>> graph;
      for (const auto& e : f.at("graph"))
        graph.emplace_back(e.at(0).get<std::vector<std::string>>(), e.at(1).get<std::string>());
      s.add_function_labels(name, f.at("arity").get<std::size_t>(), graph);
    }
  if (j.contains("constants"))
    for (const auto& [name, label] : j.at("constants").items()) s.add_constant(name, s.index_of(label.get<std::string>()));
  return s;
}

Json load(const std::string& text_or_path) {
  auto first = text_or_path.find_first_not_of(" \t\n");
  std::string text;
  if (first != std::string::npos && (text_or_path[first] == '{' || text_or_path[first] == '[')) {
    text = text_or_path;
  } else {
    std::ifstream in(text_or_path);
    if (!in) fail(ErrorKind::ParseError, "cannot read " + text_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::ParseError, e.what());
  }
}

}  // namespace nsa::io
