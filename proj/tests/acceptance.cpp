// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "nsa/hyperrational.hpp"
#include "nsa/suites.hpp"
#include "nsa/superstruct.hpp"

using namespace nsa;
namespace su = nsa::suites;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("criterion %2d %s: %s  (%s)\n", id, ok ? "PASS" : "FAIL", title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string summary(const su::SuiteResult& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu cases, %zu failed, %.2f s", r.cases, r.failed, r.seconds);
  std::string s = buf;
  if (r.failed) s += "; first: " + r.first_failure;
  return s;
}

void suite(int id, const std::string& title, const std::function<su::SuiteResult()>& run, double budget = 0,
           std::size_t min_cases = 1) {
  su::SuiteResult r;
  try {
    r = run();
  } catch (const Error& e) {
    report(id, title, false, std::string("error: ") + e.what());
    return;
  }
  bool ok = r.ok() && r.cases >= min_cases && (budget == 0 || r.seconds < budget);
  report(id, title, ok, summary(r) + (budget > 0 ? ", budget " + std::to_string(static_cast<int>(budget)) + " s" : ""));
}

}  // namespace

int main() {
  suite(1, "ordered field axioms on 10000 triples", [] { return su::field_axioms(10000); }, 10.0, 10000);

  {
    const HyperRational w = HyperRational::omega(), e = HyperRational::epsilon();
    bool ok = e * w == HyperRational(1) && classify(e).kind == Magnitude::Infinitesimal &&
              classify(w).kind == Magnitude::Infinite && standard_part(e) == Rational(0);
    bool st_w_fails = false;
    try {
      standard_part(w);
    } catch (const Error& err) {
      st_w_fails = err.kind() == ErrorKind::InfiniteNumber;
    }
    report(2, "eps * w = 1, classification, st(eps) = 0, st(w) errors", ok && st_w_fails,
           "eps*w = " + (e * w).to_string());
  }

  suite(3, "st is an order-preserving ring homomorphism on Gal(0)", [] { return su::st_homomorphism(1000); });
  suite(4, "closed-form and sequence comparisons agree", [] { return su::cross_tier(1000); });
  suite(5, "filter/ideal and measure round trips, dichotomy, union", [] { return su::filter_round_trips(10000); });
  suite(6, "Los theorem, exhaustive finite configuration", [] { return su::los_exhaustive(); }, 60.0, 10000);

  {
    try {
      super::MonoConfig cfg;
      cfg.strict = false;
      auto rep = super::monomorphism_suite(cfg);
      bool identity = false;
      for (const auto& c : rep.checks) identity = identity || c.name.find("identity") != std::string::npos;
      report(7, "monomorphism axioms and clauses, star = identity",
             rep.failed() == 0 && rep.checks.size() == 18 && identity,
             std::to_string(rep.checks.size()) + " checks, " + std::to_string(rep.cases()) + " cases, " +
                 std::to_string(rep.failed()) + " failed");
    } catch (const Error& e) {
      report(7, "monomorphism axioms and clauses, star = identity", false, e.what());
    }
  }

  suite(8, "simple-language transfer verifier", [] { return su::transfer_verifier(); });
  suite(9, "saturation witness for *(0, 1/n)", [] { return su::saturation(50); });
  suite(10, "calculus: limits, limit points, limit => Cauchy => bounded", [] { return su::calculus(50); });
  suite(11, "topology of interval unions", [] { return su::topology(100); });
  suite(12, "hyperfinite sums", [] { return su::hyperfinite_sums(); });
  suite(13, "Loeb golden values", [] { return su::loeb_golden(100); }, 10.0);
  suite(14, "overflow witnesses", [] { return su::overflow(); });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
