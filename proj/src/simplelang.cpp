#include "nsa/simplelang.hpp"

#include <cctype>
#include <cstring>

namespace nsa::simple {

bool STerm::has_vars() const {
  if (kind == Kind::Var) return true;
  for (const auto& a : args)
    if (a.has_vars()) return true;
  return false;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NotInterpretable: return "NotInterpretable";
    case Verdict::True: return "True";
    case Verdict::False: return "False";
  }
  return "?";
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok { Ident, Number, LParen, RParen, LBracket, RBracket, Lt, Gt, Le, Ge, EqOp, Ne, Comma, Amp, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

[[noreturn]] void parse_error(std::size_t pos, const std::string& msg) {
  fail(ErrorKind::ParseError, "at " + std::to_string(pos) + ": " + msg);
}

[[noreturn]] void not_simple(std::size_t pos, const std::string& what) {
  parse_error(pos, what + " is not part of the simple language (only forall, & and ->); "
                          "express existentials with a witness function via skolemize");
}

bool starts(std::string_view s, std::size_t i, const char* lit) { return s.substr(i, std::strlen(lit)) == lit; }

std::vector<Token> lex(std::string_view s, bool allow_exists) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, std::size_t p) { out.push_back({k, std::move(t), p}); };
  while (i < s.size()) {
    unsigned char c = s[i];
    std::size_t p = i;
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    // unicode operators
    if (starts(s, i, "−")) {  // minus sign
      std::string num = "-";
      i += 3;
      if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) parse_error(p, "expected digits after minus");
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) num += s[i++];
      push(Tok::Number, num, p);
      continue;
    }
    if (starts(s, i, "≥")) { push(Tok::Ge, ">=", p); i += 3; continue; }
    if (starts(s, i, "≤")) { push(Tok::Le, "<=", p); i += 3; continue; }
    if (starts(s, i, "≠")) { push(Tok::Ne, "!=", p); i += 3; continue; }
    if (starts(s, i, "∧")) { push(Tok::Amp, "&", p); i += 3; continue; }
    if (starts(s, i, "→")) { push(Tok::Arrow, "->", p); i += 3; continue; }
    if (starts(s, i, "¬")) not_simple(p, "negation");
    if (starts(s, i, "∨")) not_simple(p, "disjunction");
    if (starts(s, i, "∃")) {
      if (!allow_exists) not_simple(p, "the existential quantifier");
      push(Tok::Ident, "exists", p);
      i += 3;
      continue;
    }
    if (starts(s, i, "∀")) { push(Tok::Ident, "forall", p); i += 3; continue; }
    switch (c) {
      case '(': push(Tok::LParen, "(", p); ++i; continue;
      case ')': push(Tok::RParen, ")", p); ++i; continue;
      case '[': push(Tok::LBracket, "[", p); ++i; continue;
      case ']': push(Tok::RBracket, "]", p); ++i; continue;
      case ',': push(Tok::Comma, ",", p); ++i; continue;
      case '&': push(Tok::Amp, "&", p); ++i; continue;
      case '=': push(Tok::EqOp, "=", p); ++i; continue;
      case '~': not_simple(p, "negation");
      case '|': not_simple(p, "disjunction");
      case '!':
        if (starts(s, i, "!=")) { push(Tok::Ne, "!=", p); i += 2; continue; }
        not_simple(p, "negation");
      case '<':
        if (starts(s, i, "<=")) { push(Tok::Le, "<=", p); i += 2; continue; }
        push(Tok::Lt, "<", p); ++i; continue;
      case '>':
        if (starts(s, i, ">=")) { push(Tok::Ge, ">=", p); i += 2; continue; }
        push(Tok::Gt, ">", p); ++i; continue;
      case '-':
        if (starts(s, i, "->")) { push(Tok::Arrow, "->", p); i += 2; continue; }
        if (i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
          std::string num = "-";
          ++i;
          while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) num += s[i++];
          push(Tok::Number, num, p);
          continue;
        }
        parse_error(p, "unexpected '-'");
      default: break;
    }
    if (std::isdigit(c)) {
      std::string num;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) num += s[i++];
      push(Tok::Number, num, p);
      continue;
    }
    if (std::isalpha(c) || c == '_' || c == '*' || c >= 0x80) {
      std::string id;
      id += s[i++];
      while (i < s.size()) {
        unsigned char d = s[i];
        if (d >= 0x80) {
          // stop before a multi-byte operator
          if (starts(s, i, "−") || starts(s, i, "≥") || starts(s, i, "≤") || starts(s, i, "≠") ||
              starts(s, i, "∧") || starts(s, i, "→") || starts(s, i, "¬") || starts(s, i, "∨"))
            break;
        } else if (!(std::isalnum(d) || d == '_')) {
          break;
        }
        id += s[i++];
      }
      if (id == "exists" && !allow_exists) not_simple(p, "the existential quantifier");
      if (id == "not") not_simple(p, "negation");
      if (id == "or") not_simple(p, "disjunction");
      push(Tok::Ident, id, p);
      continue;
    }
    parse_error(p, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  push(Tok::End, "", s.size());
  return out;
}

std::string normalize_number(const std::string& text, std::size_t pos) {
  try {
    return Rational::parse(text).to_string();
  } catch (const Error&) {
    parse_error(pos, "bad number '" + text + "'");
  }
}

struct Quantifier {
  bool exists;
  std::string var;
};

struct Parsed {
  std::vector<Quantifier> quants;
  std::vector<RelApp> premises, conclusions;
  bool atomic = false;
};

class Parser {
 public:
  Parser(std::string_view text, bool allow_exists) : toks_(lex(text, allow_exists)), allow_exists_(allow_exists) {}

  Parsed sentence() {
    Parsed out;
    while (peek().kind == Tok::LParen && toks_[i_ + 1].kind == Tok::Ident &&
           (toks_[i_ + 1].text == "forall" || toks_[i_ + 1].text == "exists")) {
      const Token& q = toks_[i_ + 1];
      if (q.text == "exists" && !allow_exists_) not_simple(q.pos, "the existential quantifier");
      i_ += 2;
      const Token& v = expect(Tok::Ident, "variable name");
      expect(Tok::RParen, "')'");
      for (const auto& prev : out.quants)
        if (prev.var == v.text) parse_error(v.pos, "variable '" + v.text + "' quantified twice");
      out.quants.push_back({q.text == "exists", v.text});
    }
    if (out.quants.empty()) {
      out.atomic = true;
      out.conclusions.push_back(relapp());
    } else {
      expect(Tok::LBracket, "'['");
      out.premises = conj();
      expect(Tok::Arrow, "'->'");
      out.conclusions = conj();
      expect(Tok::RBracket, "']'");
    }
    expect(Tok::End, "end of input");
    return out;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      parse_error(peek().pos, std::string("expected ") + what +
                                  (peek().kind == Tok::End ? " but input ended" : " near '" + peek().text + "'"));
    }
    return toks_[i_++];
  }

  std::vector<RelApp> conj() {
    std::vector<RelApp> out{relapp()};
    while (peek().kind == Tok::Amp) {
      ++i_;
      out.push_back(relapp());
    }
    return out;
  }

  RelApp relapp() {
    if (peek().kind == Tok::LParen) {
      ++i_;
      STerm a = term();
      const Token& op = peek();
      std::string name;
      switch (op.kind) {
        case Tok::Lt: name = "Lt"; break;
        case Tok::Le: name = "Leq"; break;
        case Tok::Gt: name = "Gt"; break;
        case Tok::Ge: name = "Geq"; break;
        case Tok::EqOp: name = "Eq"; break;
        case Tok::Ne: name = "Neq"; break;
        default: parse_error(op.pos, "expected a comparison operator");
      }
      ++i_;
      STerm b = term();
      expect(Tok::RParen, "')'");
      return {name, {std::move(a), std::move(b)}};
    }
    const Token& name = expect(Tok::Ident, "relation name");
    expect(Tok::Lt, "'<'");
    RelApp r{name.text, {}};
    r.args.push_back(term());
    while (peek().kind == Tok::Comma) {
      ++i_;
      r.args.push_back(term());
    }
    expect(Tok::Gt, "'>'");
    return r;
  }

  STerm term() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++i_;
      return STerm::constant(normalize_number(t.text, t.pos));
    }
    const Token& name = expect(Tok::Ident, "term");
    if (peek().kind != Tok::LParen) return STerm::constant(name.text);
    ++i_;
    std::vector<STerm> args{term()};
    while (peek().kind == Tok::Comma) {
      ++i_;
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return STerm::app(name.text, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  bool allow_exists_;
};

void bind_vars(STerm& t, const std::set<std::string>& vars) {
  if (t.kind == STerm::Kind::Const && vars.count(t.name)) t.kind = STerm::Kind::Var;
  for (auto& a : t.args) bind_vars(a, vars);
}

void bind_vars(std::vector<RelApp>& apps, const std::set<std::string>& vars) {
  for (auto& a : apps)
    for (auto& t : a.args) bind_vars(t, vars);
}

class SymbolCheck {
 public:
  explicit SymbolCheck(const Signature* sig) : sig_(sig) {}

  void check(const RelApp& a) {
    arity(a.rel, a.args.size(), sig_ ? &sig_->relations : nullptr, rels_, "relation");
    for (const auto& t : a.args) check(t);
  }

 private:
  void check(const STerm& t) {
    if (t.kind == STerm::Kind::App) {
      arity(t.name, t.args.size(), sig_ ? &sig_->functions : nullptr, funs_, "function");
      for (const auto& a : t.args) check(a);
    } else if (t.kind == STerm::Kind::Const && sig_ && sig_->check_constants && !sig_->constants.count(t.name)) {
      fail(ErrorKind::UnknownSymbol, "constant '" + t.name + "'");
    }
  }

  void arity(const std::string& name, std::size_t n, const std::map<std::string, std::size_t>* table,
             std::map<std::string, std::size_t>& seen, const char* what) {
    if (table) {
      auto it = table->find(name);
      if (it == table->end()) fail(ErrorKind::UnknownSymbol, std::string(what) + " '" + name + "'");
      if (it->second != n)
        fail(ErrorKind::ArityError, std::string(what) + " '" + name + "' takes " + std::to_string(it->second) +
                                        " arguments, got " + std::to_string(n));
    }
    auto [it, fresh] = seen.emplace(name, n);
    if (!fresh && it->second != n)
      fail(ErrorKind::ArityError, std::string(what) + " '" + name + "' used with " + std::to_string(it->second) +
                                      " and " + std::to_string(n) + " arguments");
  }

  const Signature* sig_;
  std::map<std::string, std::size_t> rels_, funs_;
};

}  // namespace

SSentence parse_sentence(std::string_view text, const Signature* sig) {
  Parsed p = Parser(text, false).sentence();
  SymbolCheck check(sig);
  if (p.atomic) {
    check.check(p.conclusions[0]);
    return Atomic{std::move(p.conclusions[0])};
  }
  Compound c;
  std::set<std::string> vars;
  for (const auto& q : p.quants) {
    c.vars.push_back(q.var);
    vars.insert(q.var);
  }
  bind_vars(p.premises, vars);
  bind_vars(p.conclusions, vars);
  for (const auto& a : p.premises) check.check(a);
  for (const auto& a : p.conclusions) check.check(a);
  c.premises = std::move(p.premises);
  c.conclusions = std::move(p.conclusions);
  return c;
}

SkolemSpec parse_skolem_spec(std::string_view text) {
  Parsed p = Parser(text, true).sentence();
  if (p.atomic || p.quants.empty() || !p.quants.back().exists)
    fail(ErrorKind::ParseError, "a Skolem spec ends with exactly one (exists v) quantifier");
  SkolemSpec spec;
  std::set<std::string> vars;
  for (std::size_t i = 0; i + 1 < p.quants.size(); ++i) {
    if (p.quants[i].exists) fail(ErrorKind::ParseError, "only the last quantifier may be existential");
    spec.vars.push_back(p.quants[i].var);
    vars.insert(p.quants[i].var);
  }
  spec.exvar = p.quants.back().var;
  bind_vars(p.premises, vars);
  vars.insert(spec.exvar);
  bind_vars(p.conclusions, vars);
  for (const auto& a : p.premises)
    for (const auto& t : a.args)
      if (t.name == spec.exvar) fail(ErrorKind::ParseError, "premises may not mention the existential variable");
  spec.premises = std::move(p.premises);
  spec.conclusions = std::move(p.conclusions);
  return spec;
}

// ---------------------------------------------------------------- rendering and transfer

std::string render(const STerm& t) {
  if (t.kind != STerm::Kind::App) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) out += (i ? "," : "") + render(t.args[i]);
  return out + ")";
}

std::string render(const RelApp& a) {
  std::string out = a.rel + "<";
  for (std::size_t i = 0; i < a.args.size(); ++i) out += (i ? "," : "") + render(a.args[i]);
  return out + ">";
}

std::string render(const SSentence& s) {
  if (const auto* a = std::get_if<Atomic>(&s)) return render(a->app);
  const auto& c = std::get<Compound>(s);
  std::string out;
  for (const auto& v : c.vars) out += "(forall " + v + ")";
  auto join = [](const std::vector<RelApp>& apps) {
    std::string r;
    for (std::size_t i = 0; i < apps.size(); ++i) r += (i ? " & " : "") + render(apps[i]);
    return r;
  };
  return out + "[ " + join(c.premises) + " -> " + join(c.conclusions) + " ]";
}

std::string star_name(const std::string& name) { return !name.empty() && name[0] == '*' ? name : "*" + name; }

namespace {

STerm star(const STerm& t) {
  if (t.kind != STerm::Kind::App) return t;
  std::vector<STerm> args;
  for (const auto& a : t.args) args.push_back(star(a));
  return STerm::app(star_name(t.name), std::move(args));
}

RelApp star(const RelApp& a) {
  RelApp r{star_name(a.rel), {}};
  for (const auto& t : a.args) r.args.push_back(star(t));
  return r;
}

std::vector<RelApp> star(const std::vector<RelApp>& apps) {
  std::vector<RelApp> out;
  for (const auto& a : apps) out.push_back(star(a));
  return out;
}

}  // namespace

SSentence star_transfer(const SSentence& s) {
  if (const auto* a = std::get_if<Atomic>(&s)) return Atomic{star(a->app)};
  const auto& c = std::get<Compound>(s);
  return Compound{c.vars, star(c.premises), star(c.conclusions)};
}

// ---------------------------------------------------------------- semantics

namespace {

template <class Sys>
using Env = std::map<std::string, typename Sys::Elem>;

template <class Sys>
std::optional<typename Sys::Elem> interp(const STerm& t, const Sys& s, const Env<Sys>& env) {
  switch (t.kind) {
    case STerm::Kind::Const: {
      auto v = s.constant(t.name);
      if (!v) fail(ErrorKind::UnknownSymbol, "constant '" + t.name + "'");
      return v;
    }
    case STerm::Kind::Var: {
      auto it = env.find(t.name);
      if (it == env.end()) fail(ErrorKind::NotASentence, "free variable '" + t.name + "'");
      return it->second;
    }
    case STerm::Kind::App: {
      std::vector<typename Sys::Elem> args;
      for (const auto& a : t.args) {
        auto v = interp(a, s, env);
        if (!v) return std::nullopt;
        args.push_back(std::move(*v));
      }
      return s.apply(t.name, args);
    }
  }
  return std::nullopt;
}

template <class Sys>
Verdict eval_app(const RelApp& a, const Sys& s, const Env<Sys>& env) {
  std::vector<typename Sys::Elem> args;
  for (const auto& t : a.args) {
    auto v = interp(t, s, env);
    if (!v) return Verdict::NotInterpretable;
    args.push_back(std::move(*v));
  }
  return s.holds(a.rel, args) ? Verdict::True : Verdict::False;
}

template <class Sys, class Label>
Evaluation eval_compound(const Compound& c, const Sys& s,
                         const std::vector<std::vector<typename Sys::Elem>>& ranges, Label label) {
  for (const auto& r : ranges)
    if (r.empty()) return {Verdict::True, {}};
  std::vector<std::size_t> idx(c.vars.size(), 0);
  Env<Sys> env;
  while (true) {
    for (std::size_t k = 0; k < idx.size(); ++k) env.insert_or_assign(c.vars[k], ranges[k][idx[k]]);
    bool premises = true;
    for (const auto& p : c.premises)
      if (eval_app(p, s, env) != Verdict::True) {
        premises = false;
        break;
      }
    if (premises) {
      for (const auto& q : c.conclusions)
        if (eval_app(q, s, env) != Verdict::True) {
          Evaluation e{Verdict::False, {}};
          for (std::size_t k = 0; k < idx.size(); ++k) e.counterexample.emplace_back(c.vars[k], label(env.at(c.vars[k])));
          return e;
        }
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == ranges[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return {Verdict::True, {}};
}

}  // namespace

std::optional<FiniteSystem::Elem> interpret_term(const STerm& t, const FiniteSystem& s) {
  if (t.has_vars()) fail(ErrorKind::NotASentence, "term has variables: " + render(t));
  return interp(t, s, {});
}

std::optional<HyperRational> interpret_term(const STerm& t, const HyperSystem& s) {
  if (t.has_vars()) fail(ErrorKind::NotASentence, "term has variables: " + render(t));
  return interp(t, s, {});
}

Evaluation evaluate_detailed(const SSentence& phi, const FiniteSystem& s) {
  if (const auto* a = std::get_if<Atomic>(&phi)) return {eval_app(a->app, s, {}), {}};
  const auto& c = std::get<Compound>(phi);
  std::vector<FiniteSystem::Elem> all(s.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<std::vector<FiniteSystem::Elem>> ranges(c.vars.size(), all);
  return eval_compound(c, s, ranges, [&](FiniteSystem::Elem e) { return s.labels()[e]; });
}

Verdict evaluate(const SSentence& phi, const FiniteSystem& s) { return evaluate_detailed(phi, s).verdict; }

Verdict evaluate(const SSentence& phi, const HyperSystem& s, const HyperRanges& ranges) {
  if (const auto* a = std::get_if<Atomic>(&phi)) return eval_app(a->app, s, {});
  const auto& c = std::get<Compound>(phi);
  std::vector<std::vector<HyperRational>> rs;
  for (const auto& v : c.vars) {
    auto it = ranges.find(v);
    if (it == ranges.end())
      fail(ErrorKind::InfiniteQuantifierRange, "variable '" + v + "' ranges over the whole hyperrational line");
    rs.push_back(it->second);
  }
  return eval_compound(c, s, rs, [](const HyperRational& x) { return x.to_string(); }).verdict;
}

// ---------------------------------------------------------------- skolemization

namespace {

STerm replace_var(const STerm& t, const std::string& var, const STerm& by) {
  if (t.kind == STerm::Kind::Var && t.name == var) return by;
  STerm r = t;
  for (auto& a : r.args) a = replace_var(a, var, by);
  return r;
}

}  // namespace

SSentence skolemize(const SkolemSpec& spec, const std::string& witness, const FiniteSystem& s) {
  auto it = s.functions().find(witness);
  if (it == s.functions().end()) fail(ErrorKind::UnknownSymbol, "witness function '" + witness + "'");
  if (it->second.arity != spec.vars.size())
    fail(ErrorKind::ArityError, "witness '" + witness + "' must take " + std::to_string(spec.vars.size()) + " arguments");
  if (spec.vars.empty()) fail(ErrorKind::InvalidArgument, "Skolem spec needs a universal variable");

  std::vector<STerm> vars;
  for (const auto& v : spec.vars) vars.push_back(STerm::var(v));
  STerm w = STerm::app(witness, vars);
  Compound c{spec.vars, spec.premises, {}};
  for (const auto& q : spec.conclusions) {
    RelApp r{q.rel, {}};
    for (const auto& t : q.args) r.args.push_back(replace_var(t, spec.exvar, w));
    c.conclusions.push_back(std::move(r));
  }

  // totality: every tuple satisfying the premises lies in the witness domain
  RelApp defined{"__defined", {w}};
  struct Probe {
    const FiniteSystem& s;
    using Elem = FiniteSystem::Elem;
    std::optional<Elem> constant(const std::string& n) const { return s.constant(n); }
    std::optional<Elem> apply(const std::string& f, std::span<const Elem> a) const { return s.apply(f, a); }
    bool holds(const std::string& r, std::span<const Elem> a) const { return r == "__defined" || s.holds(r, a); }
  } probe{s};
  std::vector<FiniteSystem::Elem> all(s.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Compound totality{spec.vars, spec.premises, {defined}};
  Evaluation e = eval_compound(totality, probe, std::vector<std::vector<FiniteSystem::Elem>>(spec.vars.size(), all),
                               [&](FiniteSystem::Elem x) { return s.labels()[x]; });
  if (e.verdict != Verdict::True) {
    std::string at;
    for (const auto& [v, l] : e.counterexample) at += (at.empty() ? "" : ", ") + v + "=" + l;
    fail(ErrorKind::WitnessNotTotal, "'" + witness + "' undefined at " + at);
  }
  return c;
}

}  // namespace nsa::simple
