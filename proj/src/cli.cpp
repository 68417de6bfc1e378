#include "nsa/cli.hpp"

#include <CLI11.hpp>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "nsa/hyperrational.hpp"
#include "nsa/json_io.hpp"
#include "nsa/loeb.hpp"
#include "nsa/nscalc.hpp"
#include "nsa/simplelang.hpp"
#include "nsa/suites.hpp"
#include "nsa/superstruct.hpp"
#include "nsa/ultrapower_seq.hpp"

namespace nsa::cli {

using io::Json;

// ---------------------------------------------------------------- session

Session Session::from_json(const std::string& text) {
  Session s;
  Json j = Json::parse(text);
  if (j.contains("commitments"))
    for (const auto& c : j.at("commitments")) s.commitments[c.at("mod").get<std::uint64_t>()] = c.at("res").get<std::uint64_t>();
  if (j.contains("config") && j.at("config").contains("horizon")) s.horizon = j.at("config").at("horizon").get<std::uint64_t>();
  if (j.contains("bindings"))
    for (const auto& [k, v] : j.at("bindings").items()) s.bindings[k] = v.get<std::string>();
  // Replaying catches an incoherent file early.
  s.oracle(filters::Policy::ExplicitOnly);
  return s;
}

std::string Session::to_json() const {
  Json j;
  j["commitments"] = Json::array();
  for (const auto& [m, r] : commitments) j["commitments"].push_back({{"mod", m}, {"res", r}});
  j["config"] = {{"horizon", horizon}};
  j["bindings"] = Json::object();
  for (const auto& [k, v] : bindings) j["bindings"][k] = v;
  return j.dump(2) + "\n";
}

Session Session::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(buf.str());
  } catch (const Json::exception& e) {
    fail(ErrorKind::ParseError, "session " + path + ": " + e.what());
  }
}

void Session::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << to_json();
}

filters::UltrafilterOracle Session::oracle(filters::Policy policy) const {
  filters::UltrafilterOracle o(policy);
  for (const auto& [m, r] : commitments) o.commit(m, r);
  return o;
}

namespace {

struct Report {
  std::string command;
  Json verdicts = Json::object();
  Json witnesses = Json::array();
  std::vector<std::string> lines;
  int code = Ok;

  void say(const std::string& key, const Json& value, const std::string& line) {
    verdicts[key] = value;
    lines.push_back(line);
  }
};

struct Ctx {
  Session session;
  filters::UltrafilterOracle oracle;
  Report rep;
};

std::string digest(const std::vector<std::string>& args) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& a : args) {
    for (unsigned char c : a) h = (h ^ c) * 1099511628211ull;
    h = (h ^ 0xff) * 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::ArityError:
    case ErrorKind::UnknownSymbol:
      return Usage;
    case ErrorKind::NeedCommitment:
      return NeedsCommitment;
    default:
      return DomainError;
  }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Session bindings are spliced in as parenthesised text before parsing.
HyperRational parse_expr(const std::string& text, const Session& s) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      std::string id = text.substr(i, j - i);
      auto it = s.bindings.find(id);
      out += (it != s.bindings.end() && id != "w" && id != "eps") ? "(" + it->second + ")" : id;
      i = j;
    } else {
      out += text[i++];
    }
  }
  return parse_hyper(out);
}

Json counts_json(const super::SuiteReport& r) {
  Json j;
  j["checked"] = r.cases();
  j["passed"] = r.cases() - r.failed();
  j["failed"] = r.failed();
  return j;
}

void suite_report(Report& rep, const super::SuiteReport& r) {
  rep.verdicts = counts_json(r);
  rep.lines.push_back("checked " + std::to_string(r.cases()) + ", passed " + std::to_string(r.cases() - r.failed()) +
                      ", failed " + std::to_string(r.failed()));
  for (const auto& c : r.checks) {
    rep.lines.push_back("  " + c.name + ": " + std::to_string(c.cases) + " cases, " + std::to_string(c.failed) + " failed");
    if (c.failed) rep.witnesses.push_back({{"check", c.name}, {"counterexample", c.first_failure}});
  }
  if (r.failed()) rep.code = SuiteFailed;
}

void value_report(Report& rep, const HyperRational& x) {
  rep.verdicts["value"] = x.to_string();
  rep.verdicts["hyper"] = io::hyper_json(x);
  rep.lines.push_back(x.to_string());
}

struct Opts {
  std::string expr, expr2, save;
  std::uint64_t mod = 0, res = 0;
  std::string a, b, spec, set, chain, system;
  std::uint64_t depth = 0;
  std::vector<std::string> lets, candidates;
  std::size_t index = 2, principal = 0, count = 50, atoms = 2, sdepth = 2, sample = 3000;
  std::string formulas = "auto", kind = "poly", upper, poly, g, gden = "1", grid, demo = "geometric", name;
  long lower = 1;
  unsigned mct_depth = 8;
  std::size_t samples = 0;
};

using Handler = std::function<void(Ctx&)>;

void build(CLI::App& app, Opts& o, std::vector<std::pair<CLI::App*, Handler>>& handlers) {
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, Handler h) {
    CLI::App* s = parent->add_subcommand(name, desc);
    handlers.emplace_back(s, std::move(h));
    return s;
  };

  // hr
  CLI::App* hr = app.add_subcommand("hr", "hyperrational expressions");
  hr->require_subcommand(1);
  auto* hr_eval = leaf(hr, "eval", "canonical form", [&o](Ctx& c) {
    HyperRational x = parse_expr(o.expr, c.session);
    value_report(c.rep, x);
    if (!o.save.empty()) c.session.bindings[o.save] = x.to_string();
  });
  hr_eval->add_option("expr", o.expr)->required();
  hr_eval->add_option("--save", o.save, "store the value in the session under this name");
  leaf(hr, "st", "standard part", [&o](Ctx& c) {
    Rational s = standard_part(parse_expr(o.expr, c.session));
    c.rep.say("st", s.to_string(), s.to_string());
  })->add_option("expr", o.expr)->required();
  leaf(hr, "classify", "infinitesimal, finite or infinite", [&o](Ctx& c) {
    auto k = classify(parse_expr(o.expr, c.session));
    c.rep.say("magnitude", std::string(magnitude_name(k.kind)), std::string(magnitude_name(k.kind)));
    if (k.st) c.rep.say("st", k.st->to_string(), "st = " + k.st->to_string());
  })->add_option("expr", o.expr)->required();
  auto* hr_cmp = leaf(hr, "compare", "order, infinite closeness and galaxies", [&o](Ctx& c) {
    HyperRational x = parse_expr(o.expr, c.session), y = parse_expr(o.expr2, c.session);
    std::string rel = x < y ? "<" : x == y ? "=" : ">";
    c.rep.say("order", rel, x.to_string() + " " + rel + " " + y.to_string());
    bool close = infinitely_close(x, y), gal = same_galaxy(x, y);
    c.rep.say("infinitelyClose", close, "infinitely close: " + yes_no(close));
    c.rep.say("sameGalaxy", gal, "same galaxy: " + yes_no(gal));
  });
  hr_cmp->add_option("a", o.expr)->required();
  hr_cmp->add_option("b", o.expr2)->required();

  // oracle
  CLI::App* orc = app.add_subcommand("oracle", "ultrafilter commitments");
  orc->require_subcommand(1);
  auto* commit = leaf(orc, "commit", "commit a residue class", [&o](Ctx& c) {
    c.oracle.commit(o.mod, o.res);
    c.rep.say("committed", {{"mod", o.mod}, {"res", o.res}},
              "committed " + std::to_string(o.res) + " mod " + std::to_string(o.mod));
  });
  commit->add_option("--mod", o.mod)->required();
  commit->add_option("--res", o.res)->required();
  leaf(orc, "show", "list commitments", [](Ctx& c) {
    Json list = Json::array();
    for (const auto& [m, r] : c.oracle.commitments()) {
      list.push_back({{"mod", m}, {"res", r}});
      c.rep.lines.push_back(std::to_string(r) + " mod " + std::to_string(m));
    }
    if (list.empty()) c.rep.lines.push_back("no commitments");
    c.rep.verdicts["commitments"] = list;
    c.rep.verdicts["policy"] = c.oracle.policy() == filters::Policy::AutoLeastResidue ? "AutoLeastResidue" : "ExplicitOnly";
  });

  // seq
  CLI::App* sq = app.add_subcommand("seq", "sequences modulo the ultrafilter");
  sq->require_subcommand(1);
  auto spec = [&o] { return io::sequence_of(io::load(o.spec)); };
  auto* cmp = leaf(sq, "compare", "compare two sequences", [&o](Ctx& c) {
    auto s = io::sequence_of(io::load(o.a)), t = io::sequence_of(io::load(o.b));
    seq::Order ord = seq::seq_compare(s, t, c.oracle);
    c.rep.say("order", std::string(seq::order_name(ord)), std::string(seq::order_name(ord)));
    c.rep.witnesses.push_back({{"indices", io::epset_json(seq::compare_set(s, t, ord, c.session.horizon))}});
  });
  cmp->add_option("--a", o.a, "sequence JSON (file or inline)")->required();
  cmp->add_option("--b", o.b)->required();
  auto* mem = leaf(sq, "member", "is [s] in *A", [&o, spec](Ctx& c) {
    bool in = seq::star_set_membership(io::interval_union_of(io::load(o.set)), spec(), c.oracle);
    c.rep.say("member", in, in ? "member" : "not a member");
  });
  mem->add_option("--spec", o.spec)->required();
  mem->add_option("--set", o.set)->required();
  leaf(sq, "limit", "limit through the monad", [spec](Ctx& c) {
    auto l = calc::limit_via_monad(spec());
    c.rep.say("limit", l ? Json(l->to_string()) : Json(), l ? "limit " + l->to_string() : "no limit");
  })->add_option("--spec", o.spec)->required();
  leaf(sq, "cauchy", "Cauchy test", [spec](Ctx& c) {
    bool b = calc::is_cauchy(spec());
    c.rep.say("cauchy", b, "cauchy: " + yes_no(b));
  })->add_option("--spec", o.spec)->required();
  leaf(sq, "bounded", "boundedness test", [spec](Ctx& c) {
    bool b = calc::is_bounded(spec());
    c.rep.say("bounded", b, "bounded: " + yes_no(b));
  })->add_option("--spec", o.spec)->required();
  leaf(sq, "limitpoints", "standard limit points", [spec](Ctx& c) {
    auto lp = calc::limit_points(spec());
    Json pts = Json::array();
    std::string line = "limit points:";
    for (const auto& p : lp.points) {
      pts.push_back(p.to_string());
      line += " " + p.to_string();
    }
    c.rep.say("points", pts, line);
    c.rep.verdicts["unboundedClasses"] = lp.unbounded_classes;
    if (!lp.unbounded_classes.empty()) c.rep.lines.push_back("unbounded classes: " + Json(lp.unbounded_classes).dump());
  })->add_option("--spec", o.spec)->required();
  auto* sat = leaf(sq, "saturate", "witness for a decreasing chain of internal sets", [&o](Ctx& c) {
    auto w = seq::saturation_witness(io::chain_of(io::load(o.chain)), c.oracle, o.depth);
    c.rep.say("witness", io::sequence_json(w), w.to_string());
  });
  sat->add_option("--chain", o.chain)->required();
  sat->add_option("--depth", o.depth)->required();

  // transfer
  CLI::App* tr = app.add_subcommand("transfer", "simple-language sentences");
  tr->require_subcommand(1);
  leaf(tr, "parse", "parse and render", [&o](Ctx& c) {
    std::string r = simple::render(simple::parse_sentence(o.expr));
    c.rep.say("sentence", r, r);
  })->add_option("sentence", o.expr)->required();
  leaf(tr, "star", "starred sentence", [&o](Ctx& c) {
    std::string r = simple::render(simple::star_transfer(simple::parse_sentence(o.expr)));
    c.rep.say("sentence", r, r);
  })->add_option("sentence", o.expr)->required();
  auto* ev = leaf(tr, "eval", "truth in a finite system, or in the hyperrational system", [&o](Ctx& c) {
    if (!o.system.empty()) {
      auto s = io::system_of(io::load(o.system));
      auto sig = s.signature();
      auto e = simple::evaluate_detailed(simple::parse_sentence(o.expr, &sig), s);
      c.rep.say("verdict", std::string(simple::verdict_name(e.verdict)), std::string(simple::verdict_name(e.verdict)));
      if (!e.counterexample.empty()) {
        Json w = Json::object();
        std::string line = "counterexample:";
        for (const auto& [v, label] : e.counterexample) {
          w[v] = label;
          line += " " + v + "=" + label;
        }
        c.rep.witnesses.push_back(w);
        c.rep.lines.push_back(line);
      }
      return;
    }
    auto h = simple::HyperSystem::standard();
    for (const auto& l : o.lets) {
      auto eq = l.find('=');
      if (eq == std::string::npos) fail(ErrorKind::ParseError, "--let expects NAME=EXPR");
      h.add_constant(l.substr(0, eq), parse_expr(l.substr(eq + 1), c.session));
    }
    auto sig = h.signature();
    auto v = simple::evaluate(simple::parse_sentence(o.expr, &sig), h);
    c.rep.say("verdict", std::string(simple::verdict_name(v)), std::string(simple::verdict_name(v)));
  });
  ev->add_option("sentence", o.expr)->required();
  ev->add_option("--system", o.system, "finite system JSON (file or inline)");
  ev->add_option("--let", o.lets, "hyperrational constant NAME=EXPR");
  auto* ver = leaf(tr, "verify", "transfer into a finite ultrapower", [&o](Ctx& c) {
    auto s = io::system_of(io::load(o.system));
    if (o.principal >= o.index) fail(ErrorKind::InvalidArgument, "--principal must be below --index");
    auto sentences = simple::enumerate_sentences(s, o.count);
    auto r = simple::verify_transfer_theorem(s, o.index, filters::Principal{filters::Subset{1} << o.principal}, sentences);
    c.rep.say("sentences", r.sentences, "sentences " + std::to_string(r.sentences));
    c.rep.say("trueInStandard", r.true_in_standard, "true in S " + std::to_string(r.true_in_standard));
    c.rep.say("trueInStar", r.true_in_star, "true in S^I/U " + std::to_string(r.true_in_star));
    Json checks = Json::object();
    for (const auto& [n, k] : r.checks) {
      checks[n] = k;
      c.rep.lines.push_back("  " + n + ": " + std::to_string(k) + " cases");
    }
    c.rep.verdicts["checks"] = checks;
  });
  ver->add_option("--system", o.system)->required();
  ver->add_option("--index", o.index, "size of the index set")->check(CLI::Range(1, 6));
  ver->add_option("--principal", o.principal, "the ultrafilter's generating index");
  ver->add_option("--count", o.count, "number of sentences");

  // super
  CLI::App* su = app.add_subcommand("super", "superstructures and bounded ultrapowers");
  su->require_subcommand(1);
  auto* sb = leaf(su, "build", "level sizes", [&o](Ctx& c) {
    auto u = super::SuperUniverse::build(o.atoms, o.sdepth);
    Json sizes = Json::array();
    for (std::size_t n = 0; n <= u.depth(); ++n) {
      sizes.push_back(u.level(n).size());
      c.rep.lines.push_back("|V_" + std::to_string(n) + "| = " + std::to_string(u.level(n).size()));
    }
    c.rep.verdicts["levels"] = sizes;
  });
  sb->add_option("--atoms", o.atoms)->required();
  sb->add_option("--depth", o.sdepth)->required();
  auto* sl = leaf(su, "los", "Los theorem over all families and formulas", [&o](Ctx& c) {
    super::LosConfig cfg;
    cfg.atoms = o.atoms;
    cfg.depth = o.sdepth;
    cfg.index_sizes = {o.index};
    cfg.depth2_sample = o.sample;
    suite_report(c.rep, super::los_exhaustive(cfg));
  });
  sl->add_option("--index", o.index)->required()->check(CLI::Range(1, 4));
  sl->add_option("--formulas", o.formulas)->check(CLI::IsMember({"auto"}));
  sl->add_option("--atoms", o.atoms);
  sl->add_option("--depth", o.sdepth);
  sl->add_option("--sample", o.sample, "depth-2 formula sample size");
  leaf(su, "mono-suite", "monomorphism axioms and clauses", [](Ctx& c) {
    super::MonoConfig cfg;
    cfg.strict = false;
    suite_report(c.rep, super::monomorphism_suite(cfg));
  });

  // hsum
  auto* hs = leaf(&app, "hsum", "hyperfinite sum in closed form", [&o](Ctx& c) {
    calc::ClosedFormSum a;
    if (o.kind == "poly") {
      if (o.poly.empty()) fail(ErrorKind::ParseError, "--poly is required for --kind poly");
      a = calc::PolySum{Poly::from_csv(o.poly)};
    } else {
      if (o.g.empty()) fail(ErrorKind::ParseError, "--g is required for --kind telescope");
      Poly gn = Poly::from_csv(o.g), gd = Poly::from_csv(o.gden);
      seq::RatFunc g(gn, gd), g1(gn.compose_linear(1, 1), gd.compose_linear(1, 1));
      a = calc::TelescopingSum{g - g1, g};
    }
    value_report(c.rep, calc::hyperfinite_sum(a, parse_expr(o.upper, c.session), o.lower));
  });
  hs->add_option("--kind", o.kind)->check(CLI::IsMember({"poly", "telescope"}));
  hs->add_option("--upper", o.upper)->required();
  hs->add_option("--lower", o.lower);
  hs->add_option("--poly", o.poly, "term coefficients, ascending");
  hs->add_option("--g", o.g, "telescoping g numerator, ascending (term g(i) - g(i+1))");
  hs->add_option("--g-den", o.gden, "telescoping g denominator");

  // perm
  CLI::App* pm = app.add_subcommand("perm", "overflow and underflow witnesses");
  pm->require_subcommand(1);
  for (auto [name, mode] : {std::pair{"overflow", calc::PermanenceMode::Overflow},
                            std::pair{"underflow", calc::PermanenceMode::Underflow},
                            std::pair{"local", calc::PermanenceMode::LocalOverflow}}) {
    auto* p = leaf(pm, name, std::string(calc::permanence_mode_name(mode)), [&o, mode = mode](Ctx& c) {
      std::vector<HyperRational> extra;
      for (const auto& e : o.candidates) extra.push_back(parse_expr(e, c.session));
      auto r = calc::overflow_witness(io::hyper_intervals_of(io::load(o.set)), mode, extra);
      c.rep.say("witness", r.witness ? Json(r.witness->to_string()) : Json(),
                r.witness ? "witness " + r.witness->to_string() : "undetermined");
      c.rep.say("note", r.note, r.note);
    });
    p->add_option("--set", o.set, "interval union JSON with expression endpoints")->required();
    p->add_option("--candidate", o.candidates, "extra candidate point");
  }

  // loeb
  CLI::App* lb = app.add_subcommand("loeb", "hyperfinite integration");
  lb->require_subcommand(1);
  auto integrate = [&o](Ctx& c, const loeb::SymFunc& f) {
    loeb::Grid g = o.grid.empty() ? loeb::Grid::for_function(f) : loeb::Grid{parse_expr(o.grid, c.session)};
    HyperRational i = loeb::internal_integral(g, f);
    Rational v = o.grid.empty() ? loeb::standardize(f) : loeb::standardize(loeb::HyperFunc(f), g);
    c.rep.say("value", v.to_string(), v.to_string());
    c.rep.say("hyper", i.to_string(), "I f = " + i.to_string() + " on N = " + g.size.to_string());
  };
  auto* li = leaf(lb, "integrate", "polynomial on [0,1]", [&o, integrate](Ctx& c) {
    integrate(c, loeb::SymFunc(Poly::from_csv(o.poly)));
  });
  li->add_option("--poly", o.poly, "coefficients, ascending")->required();
  li->add_option("--grid", o.grid, "grid size N (default: w times the breakpoint denominators)");
  auto* lm = leaf(lb, "measure", "Loeb measure of an interval union in [0,1]", [&o, integrate](Ctx& c) {
    integrate(c, loeb::SymFunc::indicator(io::interval_union_of(io::load(o.set))));
  });
  lm->add_option("--set", o.set)->required();
  lm->add_option("--grid", o.grid);
  auto* mct = leaf(lb, "mct", "monotone convergence demo", [&o](Ctx& c) {
    auto r = loeb::geometric_demo(o.mct_depth);
    Json vals = Json::array();
    for (const auto& v : r.values) vals.push_back(v.to_string());
    c.rep.verdicts["values"] = vals;
    c.rep.say("limit", r.limit_value.to_string(), "limit " + r.limit_value.to_string());
    c.rep.say("gap", r.gap.to_string(), "gap " + r.gap.to_string());
    c.rep.say("increasing", r.increasing, "increasing: " + yes_no(r.increasing));
    c.rep.say("bounded", r.bounded, "bounded: " + yes_no(r.bounded));
    c.rep.say("withinTail", r.within_tail, "within tail bound: " + yes_no(r.within_tail));
    if (!r.ok()) c.rep.code = SuiteFailed;
  });
  mct->add_option("--demo", o.demo)->check(CLI::IsMember({"geometric"}));
  mct->add_option("--depth", o.mct_depth)->check(CLI::Range(1, 64));

  // suite
  CLI::App* st = app.add_subcommand("suite", "property suites");
  st->require_subcommand(1);
  auto* run = leaf(st, "run", "run a named suite", [&o](Ctx& c) {
    auto r = suites::run_suite(o.name, o.samples);
    c.rep.say("suite", r.name, "suite " + r.name);
    c.rep.say("cases", r.cases, "cases " + std::to_string(r.cases));
    c.rep.say("passed", r.cases - r.failed, "passed " + std::to_string(r.cases - r.failed));
    c.rep.say("failed", r.failed, "failed " + std::to_string(r.failed));
    if (r.failed) {
      c.rep.witnesses.push_back({{"firstFailure", r.first_failure}});
      c.rep.lines.push_back("first failure: " + r.first_failure);
    }
    if (!r.ok()) c.rep.code = SuiteFailed;
  });
  run->add_option("name", o.name)->required();
  run->add_option("--samples", o.samples);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact nonstandard analysis toolkit", "nsa"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false, auto_commit = false;
  std::string session_path;
  std::optional<std::uint64_t> horizon;
  app.add_flag("--json", json, "print the Report object");
  app.add_option("--session", session_path, "session file (JSON)");
  app.add_flag("--auto-commit", auto_commit, "commit least residues instead of failing with NeedCommitment");
  app.add_option("--horizon", horizon, "exactness horizon for index sets");

  Opts o;
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  build(app, o, handlers);

  std::vector<std::string> argv_store{"nsa"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Ok : Usage;
  }

  const Handler* handler = nullptr;
  std::string command;
  for (const auto& [sub, h] : handlers)
    if (sub->parsed()) {
      handler = &h;
      for (const CLI::App* a = sub; a && a != &app; a = a->get_parent()) command = a->get_name() + (command.empty() ? "" : " " + command);
    }

  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.command = command;
  std::optional<Json> error;
  try {
    Ctx c{session_path.empty() ? Session{} : Session::load(session_path), filters::UltrafilterOracle(), {}};
    if (horizon) c.session.horizon = *horizon;
    c.oracle = c.session.oracle(auto_commit ? filters::Policy::AutoLeastResidue : filters::Policy::ExplicitOnly);
    c.rep.command = command;
    (*handler)(c);
    rep = std::move(c.rep);
    c.session.commitments = c.oracle.commitments();
    if (!session_path.empty()) c.session.save(session_path);
  } catch (const NeedCommitment& e) {
    err << "NeedCommitment mod " << e.modulus() << "\n";
    rep.code = NeedsCommitment;
    error = Json{{"kind", "NeedCommitment"}, {"modulus", e.modulus()}};
  } catch (const Error& e) {
    err << e.what() << "\n";
    rep.code = exit_code(e.kind());
    error = Json{{"kind", std::string(error_kind_name(e.kind()))}, {"message", e.what()}};
  } catch (const Json::exception& e) {
    err << "ParseError: " << e.what() << "\n";
    rep.code = Usage;
    error = Json{{"kind", "ParseError"}, {"message", e.what()}};
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (json) {
    Json j;
    j["command"] = rep.command;
    j["inputs"] = digest(args);
    j["verdicts"] = rep.verdicts;
    j["witnesses"] = rep.witnesses;
    if (error) j["error"] = *error;
    j["exit"] = rep.code;
    j["timing"] = seconds;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& l : rep.lines) out << l << "\n";
  }
  return rep.code;
}

}  // namespace nsa::cli
