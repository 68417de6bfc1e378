#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nsa/error.hpp"
#include "nsa/filters.hpp"
#include "nsa/hyperrational.hpp"

namespace nsa::simple {

// ---------------------------------------------------------------- syntax

struct STerm {
  enum class Kind { Const, Var, App };
  Kind kind = Kind::Const;
  std::string name;
  std::vector<STerm> args;  // App only

  static STerm constant(std::string n) { return {Kind::Const, std::move(n), {}}; }
  static STerm var(std::string n) { return {Kind::Var, std::move(n), {}}; }
  static STerm app(std::string f, std::vector<STerm> a) { return {Kind::App, std::move(f), std::move(a)}; }
  bool has_vars() const;
  friend bool operator==(const STerm&, const STerm&) = default;
};

/// Relation applied to terms, P<t1,...,tk>.
struct RelApp {
  std::string rel;
  std::vector<STerm> args;
  friend bool operator==(const RelApp&, const RelApp&) = default;
};

struct Atomic {
  RelApp app;
  friend bool operator==(const Atomic&, const Atomic&) = default;
};

/// (forall v1)...(forall vn)[ p1 & ... & pk -> c1 & ... & cl ]
struct Compound {
  std::vector<std::string> vars;
  std::vector<RelApp> premises, conclusions;
  friend bool operator==(const Compound&, const Compound&) = default;
};

using SSentence = std::variant<Atomic, Compound>;

enum class Verdict { NotInterpretable, True, False };
std::string_view verdict_name(Verdict v);

/// Names and arities a parse may be checked against.
struct Signature {
  std::map<std::string, std::size_t> relations, functions;
  std::set<std::string> constants;
  bool check_constants = true;
};

/// Parses the concrete syntax. Infix atoms (t1 op t2) map op in < <= > >= = != to
/// Lt Leq Gt Geq Eq Neq. Without a signature only arity consistency is checked.
SSentence parse_sentence(std::string_view text, const Signature* sig = nullptr);
std::string render(const SSentence& s);
std::string render(const STerm& t);
std::string render(const RelApp& a);

/// Places a star on every relation and function name; constants and variables are kept.
SSentence star_transfer(const SSentence& s);
std::string star_name(const std::string& name);

// ---------------------------------------------------------------- systems

/// Simple system over explicitly listed elements.
class FiniteSystem {
 public:
  using Elem = std::size_t;

  struct Relation {
    std::size_t arity;
    std::set<std::vector<Elem>> tuples;
  };
  struct Function {
    std::size_t arity;
    std::map<std::vector<Elem>, Elem> graph;
  };

  explicit FiniteSystem(std::vector<std::string> labels);

  /// Rational carrier with comparisons (Eq Neq Lt Leq Gt Geq, Pos, NonZero) and the
  /// partial functions add sub mul div neg abs sqrt inv restricted to the carrier.
  static FiniteSystem numeric(std::span<const Rational> values);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  Elem index_of(const std::string& label) const;  // UnknownSymbol
  const std::map<std::string, Relation>& relations() const { return rels_; }
  const std::map<std::string, Function>& functions() const { return funs_; }
  const std::map<std::string, Elem>& constants() const { return consts_; }

  void add_relation(const std::string& name, std::size_t arity, std::set<std::vector<Elem>> tuples);
  void add_function(const std::string& name, std::size_t arity, std::map<std::vector<Elem>, Elem> graph);
  void add_constant(const std::string& name, Elem e);
  /// Label-based conveniences.
  void add_relation_labels(const std::string& name, std::size_t arity,
                           const std::vector<std::vector<std::string>>& tuples);
  void add_function_labels(const std::string& name, std::size_t arity,
                           const std::vector<std::pair<std::vector<std::string>, std::string>>& graph);

  Signature signature() const;

  std::optional<Elem> constant(const std::string& name) const;
  /// nullopt when the arguments are outside the function's domain.
  std::optional<Elem> apply(const std::string& fn, std::span<const Elem> args) const;
  bool holds(const std::string& rel, std::span<const Elem> args) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, Elem> index_;
  std::map<std::string, Relation> rels_;
  std::map<std::string, Function> funs_;
  std::map<std::string, Elem> consts_;
};

/// Simple system over hyperrational elements with decidable relations and partial functions.
class HyperSystem {
 public:
  using Elem = HyperRational;
  using Pred = std::function<bool(std::span<const Elem>)>;
  using Fn = std::function<std::optional<Elem>(std::span<const Elem>)>;

  /// Starred comparisons and field operations; names are registered with and without star.
  static HyperSystem standard();

  void add_relation(const std::string& name, std::size_t arity, Pred p);
  void add_function(const std::string& name, std::size_t arity, Fn f);
  void add_constant(const std::string& name, Elem e);

  Signature signature() const;
  std::optional<Elem> constant(const std::string& name) const;
  std::optional<Elem> apply(const std::string& fn, std::span<const Elem> args) const;
  bool holds(const std::string& rel, std::span<const Elem> args) const;

 private:
  std::map<std::string, std::pair<std::size_t, Pred>> rels_;
  std::map<std::string, std::pair<std::size_t, Fn>> funs_;
  std::map<std::string, Elem> consts_;
};

/// Exact square root inside the field, when one exists.
std::optional<HyperRational> hyper_sqrt(const HyperRational& x);

using HyperRanges = std::map<std::string, std::vector<HyperRational>>;

// ---------------------------------------------------------------- semantics

std::optional<FiniteSystem::Elem> interpret_term(const STerm& t, const FiniteSystem& s);
std::optional<HyperRational> interpret_term(const STerm& t, const HyperSystem& s);

struct Evaluation {
  Verdict verdict;
  /// For a false compound: the failing substitution as (variable, element label).
  std::vector<std::pair<std::string, std::string>> counterexample;
};

Evaluation evaluate_detailed(const SSentence& phi, const FiniteSystem& s);
Verdict evaluate(const SSentence& phi, const FiniteSystem& s);
/// Compound sentences need a finite range for each quantified variable (InfiniteQuantifierRange).
Verdict evaluate(const SSentence& phi, const HyperSystem& s, const HyperRanges& ranges = {});

/// (forall vars)(exists exvar)[ premises -> conclusions ], conclusions may mention exvar.
struct SkolemSpec {
  std::vector<std::string> vars;
  std::string exvar;
  std::vector<RelApp> premises, conclusions;
};

/// Text form "(forall x)(exists y)[ ... -> ... ]".
SkolemSpec parse_skolem_spec(std::string_view text);
/// Replaces exvar by witness(vars...). WitnessNotTotal if some premise-satisfying tuple
/// lies outside the witness domain; UnknownSymbol if the witness is missing.
SSentence skolemize(const SkolemSpec& spec, const std::string& witness, const FiniteSystem& s);

// ---------------------------------------------------------------- transfer verifier

/// Ultrapower S^I / U: classes of functions I -> S, relations and functions starred.
FiniteSystem ultrapower(const FiniteSystem& s, std::size_t index_size, const filters::FilterDesc& u);

/// Deterministic list of compound sentences over the system's signature.
std::vector<SSentence> enumerate_sentences(const FiniteSystem& s, std::size_t count);

struct TransferReport {
  std::size_t sentences = 0;
  std::size_t true_in_standard = 0;
  std::size_t true_in_star = 0;
  /// Named instance checks of the set algebra, characteristic function, domain,
  /// empty set and pointwise operation identities, with the number of cases each.
  std::vector<std::pair<std::string, std::size_t>> checks;
};

/// Evaluates each sentence in S and its transfer in S^I/U; CounterexampleFound if a true
/// sentence transfers to a non-true one or any instance check fails.
TransferReport verify_transfer_theorem(const FiniteSystem& s, std::size_t index_size,
                                       const filters::FilterDesc& u, std::span<const SSentence> sentences);

}  // namespace nsa::simple
