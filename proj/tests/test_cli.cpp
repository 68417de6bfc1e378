#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "nsa/cli.hpp"

using nsa::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kAlt = R"({"mod":2,"pieces":[{"res":0,"num":[1]},{"res":1,"num":[-1]}]})";
const std::string kZero = R"({"pieces":[{"num":[0]}]})";

std::string temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("nsa_cli_" + name + ".json");
  std::filesystem::remove(p);
  return p.string();
}

std::string without_timing(const std::string& s) { return std::regex_replace(s, std::regex("\"timing\": [^\\n]*"), ""); }

}  // namespace

TEST(Cli, HrEval) {
  auto r = run({"hr", "eval", "eps * w"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\n");
  EXPECT_EQ(run({"hr", "eval", "(2*w^2 + w) / (w^2 + 1)"}).out, "(2*w^2 + w) / (w^2 + 1)\n");
}

TEST(Cli, StandardPartOfInfiniteIsDomainError) {
  auto r = run({"hr", "st", "w"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("InfiniteNumber"), std::string::npos);
  EXPECT_EQ(run({"hr", "st", "3 + eps"}).out, "3\n");
}

TEST(Cli, ClassifyAndCompare) {
  EXPECT_EQ(run({"hr", "classify", "eps"}).out, "Infinitesimal\nst = 0\n");
  EXPECT_EQ(run({"hr", "classify", "w^(1/2)"}).out, "Infinite\n");
  auto r = run({"hr", "compare", "1 + eps", "1"});
  EXPECT_EQ(r.out, "(w + 1) / w > 1\ninfinitely close: yes\nsame galaxy: yes\n");
}

TEST(Cli, ExpressionErrors) {
  EXPECT_EQ(run({"hr", "eval", "w +"}).code, 2);
  EXPECT_EQ(run({"hr", "eval", "1/0"}).code, 4);
  EXPECT_EQ(run({"hr", "eval", "1/(w - w)"}).code, 4);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"hr"}).code, 2);
  EXPECT_EQ(run({"loeb", "mct", "--demo", "harmonic"}).code, 2);
  EXPECT_EQ(run({"seq", "limit", "--spec", "{not json"}).code, 2);
  EXPECT_EQ(run({"seq", "limit", "--spec", "/nonexistent/seq.json"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, CompareNeedsCommitment) {
  auto r = run({"seq", "compare", "--a", kAlt, "--b", kZero});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err, "NeedCommitment mod 2\n");
}

TEST(Cli, CompareWithAutoCommit) {
  // Least residue 0 picks the even indices, where the sequence is 1.
  auto r = run({"--auto-commit", "seq", "compare", "--a", kAlt, "--b", kZero});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Greater\n");
}

TEST(Cli, SessionPersistsCommitments) {
  std::string path = temp_path("session");
  EXPECT_EQ(run({"--session", path, "oracle", "commit", "--mod", "2", "--res", "1"}).code, 0);
  auto r = run({"--session", path, "seq", "compare", "--a", kAlt, "--b", kZero});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Less\n");
  EXPECT_EQ(run({"--session", path, "oracle", "show"}).out, "1 mod 2\n");
  // 0 mod 4 contradicts 1 mod 2
  EXPECT_EQ(run({"--session", path, "oracle", "commit", "--mod", "4", "--res", "0"}).code, 4);
  EXPECT_EQ(run({"--session", path, "oracle", "commit", "--mod", "4", "--res", "3"}).code, 0);
  EXPECT_EQ(run({"--session", path, "oracle", "show"}).out, "1 mod 2\n3 mod 4\n");
  std::filesystem::remove(path);
}

TEST(Cli, AutoCommitIsRecordedInSession) {
  std::string path = temp_path("auto");
  EXPECT_EQ(run({"--session", path, "--auto-commit", "seq", "compare", "--a", kAlt, "--b", kZero}).code, 0);
  auto r = run({"--session", path, "seq", "compare", "--a", kAlt, "--b", kZero});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Greater\n");
  std::filesystem::remove(path);
}

TEST(Cli, SessionRoundTrip) {
  nsa::cli::Session s;
  s.commitments = {{2, 1}, {3, 0}};
  s.horizon = 500;
  s.bindings = {{"x", "w + 1"}};
  auto t = nsa::cli::Session::from_json(s.to_json());
  EXPECT_EQ(t.commitments, s.commitments);
  EXPECT_EQ(t.horizon, 500u);
  EXPECT_EQ(t.bindings, s.bindings);
  EXPECT_EQ(t.to_json(), s.to_json());
}

TEST(Cli, Bindings) {
  std::string path = temp_path("bind");
  EXPECT_EQ(run({"--session", path, "hr", "eval", "w + 1", "--save", "x"}).code, 0);
  EXPECT_EQ(run({"--session", path, "hr", "eval", "x * x"}).out, "w^2 + 2*w + 1\n");
  std::filesystem::remove(path);
}

TEST(Cli, JsonReportIsDeterministic) {
  std::string path = temp_path("det");
  run({"--session", path, "oracle", "commit", "--mod", "2", "--res", "0"});
  std::vector<std::string> argv{"--session", path, "--json", "seq", "compare", "--a", kAlt, "--b", kZero};
  auto a = run(argv), b = run(argv);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(without_timing(a.out), without_timing(b.out));
  EXPECT_NE(a.out.find("\"order\": \"Greater\""), std::string::npos);
  // field order is fixed
  auto pos = [&](const char* k) { return a.out.find(k); };
  EXPECT_LT(pos("\"command\""), pos("\"inputs\""));
  EXPECT_LT(pos("\"inputs\""), pos("\"verdicts\""));
  EXPECT_LT(pos("\"verdicts\""), pos("\"witnesses\""));
  EXPECT_LT(pos("\"witnesses\""), pos("\"timing\""));
  std::filesystem::remove(path);
}

TEST(Cli, JsonReportCarriesErrors) {
  auto r = run({"--json", "hr", "st", "w"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("\"kind\": \"InfiniteNumber\""), std::string::npos);
}

TEST(Cli, SequenceCalculus) {
  // s_n = 2 + 1/n with s_0 = 0
  std::string s = R"({"pieces":[{"num":[1,2],"den":[0,1]}],"exc":[[0,"0"]]})";
  EXPECT_EQ(run({"seq", "limit", "--spec", s}).out, "limit 2\n");
  EXPECT_EQ(run({"seq", "cauchy", "--spec", s}).out, "cauchy: yes\n");
  EXPECT_EQ(run({"seq", "bounded", "--spec", s}).out, "bounded: yes\n");
  EXPECT_EQ(run({"seq", "limit", "--spec", R"({"pieces":[{"num":[0,1]}]})"}).out, "no limit\n");
  EXPECT_EQ(run({"seq", "member", "--spec", s, "--set", R"([{"lo":"2","hi":"3","loOpen":true}])"}).out, "member\n");
  EXPECT_EQ(run({"seq", "member", "--spec", s, "--set", R"([{"lo":"2","hi":"3","loOpen":true}])"}).code, 0);
  EXPECT_EQ(run({"seq", "member", "--spec", s, "--set", R"([{"lo":"0","hi":"2","hiOpen":true}])"}).out,
            "not a member\n");
  // 1 on even indices, n on odd ones
  auto lp = run({"seq", "limitpoints", "--spec", R"({"mod":2,"pieces":[{"res":0,"num":[1]},{"res":1,"num":[0,1]}]})"});
  EXPECT_EQ(lp.out, "limit points: 1\nunbounded classes: [1]\n");
  // a pole at n = 0 with no exception is rejected
  EXPECT_EQ(run({"seq", "limit", "--spec", R"({"pieces":[{"num":[1],"den":[0,1]}]})"}).code, 4);
}

TEST(Cli, Saturate) {
  // A_n = (0, 1/(n+1)): the witness must be positive and below 1/(n+1) everywhere.
  std::string chain =
      R"({"rule":{"lo":{"num":[]},"hi":{"num":[[[0,0],"1"]],"den":[[[1,0],"1"],[[0,0],"1"]]},"loOpen":true,"hiOpen":true}})";
  auto r = run({"seq", "saturate", "--chain", chain, "--depth", "20"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "<(1/2)/(n + 1); s_0=1/2>\n");
}

TEST(Cli, Transfer) {
  EXPECT_EQ(run({"transfer", "star", "(forall x)[ Pos<x> -> NonZero<x> ]"}).out, "(forall x)[ *Pos<x> -> *NonZero<x> ]\n");
  EXPECT_EQ(run({"transfer", "parse", "Lt<a, f(b)>"}).out, "Lt<a,f(b)>\n");
  EXPECT_EQ(run({"transfer", "parse", "(forall x)[ Lt<x> ->"}).code, 2);
  auto r = run({"transfer", "eval", "(forall x)(forall y)[ Lt<x,y> -> Lt<y,x> ]", "--system", R"({"numeric":["0","1"]})"});
  EXPECT_EQ(r.out, "False\ncounterexample: x=0 y=1\n");
  EXPECT_EQ(run({"transfer", "eval", "*Lt<eps, a>", "--let", "a=1/2"}).out, "True\n");
  EXPECT_EQ(run({"transfer", "eval", "Lt<w, 3>"}).out, "False\n");
  auto v = run({"transfer", "verify", "--system", R"({"numeric":["0","1"]})"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("sentences 50\n"), std::string::npos);
}

TEST(Cli, FiniteSystemFromJson) {
  std::string sys = R"({"elements":["a","b"],"relations":{"R":{"arity":2,"tuples":[["a","b"]]}},
                        "functions":{"f":{"arity":1,"graph":[[["a"],"b"],[["b"],"a"]]}},"constants":{"c":"a"}})";
  EXPECT_EQ(run({"transfer", "eval", "R<c, f(c)>", "--system", sys}).out, "True\n");
  EXPECT_EQ(run({"transfer", "eval", "R<f(c), c>", "--system", sys}).out, "False\n");
  EXPECT_EQ(run({"transfer", "eval", "S<c>", "--system", sys}).code, 2);
}

TEST(Cli, Superstructure) {
  // |V_0| = 2, |V_1| = 2 + 2^2, |V_2| = 2 + 2^6
  EXPECT_EQ(run({"super", "build", "--atoms", "2", "--depth", "2"}).out, "|V_0| = 2\n|V_1| = 6\n|V_2| = 66\n");
  auto m = run({"super", "mono-suite", "--json"});
  EXPECT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("\"failed\": 0"), std::string::npos);
  EXPECT_EQ(run({"super", "los", "--index", "2", "--formulas", "manual"}).code, 2);
}

TEST(Cli, HyperfiniteSums) {
  // 1^2 + ... + w^2 = w^3/3 + w^2/2 + w/6
  EXPECT_EQ(run({"hsum", "--kind", "poly", "--poly", "0,0,1", "--upper", "w"}).out, "1/3*w^3 + 1/2*w^2 + 1/6*w\n");
  // sum 1/i - 1/(i+1) for i = 1..w is 1 - 1/(w+1)
  EXPECT_EQ(run({"hsum", "--kind", "telescope", "--g", "1", "--g-den", "0,1", "--upper", "w"}).out, "w / (w + 1)\n");
  EXPECT_EQ(run({"hsum", "--kind", "poly", "--poly", "1", "--upper", "w^(1/2)"}).code, 4);
  EXPECT_EQ(run({"hsum", "--kind", "bogus", "--upper", "w"}).code, 2);
}

TEST(Cli, Permanence) {
  auto r = run({"perm", "overflow", "--set", R"([{"lo":"0","hi":"w"}])"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 10), "witness w\n");
  EXPECT_EQ(run({"perm", "underflow", "--set", R"([{"lo":"w","hi":"w^2"}])"}).code, 4);
}

TEST(Cli, Loeb) {
  auto r = run({"--json", "loeb", "integrate", "--poly", "0,0,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"value\": \"1/3\""), std::string::npos);
  EXPECT_EQ(run({"loeb", "integrate", "--poly", "1"}).out.substr(0, 2), "1\n");
  EXPECT_EQ(run({"loeb", "measure", "--set", R"([{"lo":"0","hi":"1/2","loOpen":true,"hiOpen":true}])"}).out.substr(0, 4),
            "1/2\n");
  EXPECT_EQ(run({"loeb", "measure", "--set", R"([{"lo":"0","hi":"2"}])"}).code, 4);
  auto m = run({"loeb", "mct", "--demo", "geometric", "--depth", "8"});
  EXPECT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("within tail bound: yes"), std::string::npos);
}

TEST(Cli, Suites) {
  auto r = run({"suite", "run", "fieldAxioms", "--samples", "200"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("failed 0"), std::string::npos);
  EXPECT_EQ(run({"suite", "run", "noSuchSuite"}).code, 2);
}
