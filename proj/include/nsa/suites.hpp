#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nsa::suites {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0, failed = 0;
  std::string first_failure;
  double seconds = 0;
  bool ok() const { return failed == 0 && cases > 0; }
};

/// Ordered-field axioms on random hyperrational triples.
SuiteResult field_axioms(std::size_t samples = 10000, std::uint64_t seed = 1);
/// st additive, multiplicative and monotone on finite pairs.
SuiteResult st_homomorphism(std::size_t samples = 1000, std::uint64_t seed = 2);
/// Closed-form comparison against sequence comparison, under two oracles.
SuiteResult cross_tier(std::size_t samples = 1000, std::uint64_t seed = 3);
/// Ideal/filter and measure round trips on grounds of size <= 4, then
/// dichotomy and union on random eventually periodic sets.
SuiteResult filter_round_trips(std::size_t samples = 10000, std::uint64_t seed = 4);
SuiteResult los_exhaustive();
SuiteResult mono_suite();
/// Transfer verifier on a two-element system, |I| = 2, 50 sentences.
SuiteResult transfer_verifier();
/// Witness for the chain *(0, 1/n).
SuiteResult saturation(unsigned depth = 50);
/// Limits against leading coefficients, limit points, limit => Cauchy => bounded.
SuiteResult calculus(std::size_t samples = 50, std::uint64_t seed = 5);
/// Open/closed/compact against a sampling oracle.
SuiteResult topology(std::size_t samples = 100, std::uint64_t seed = 6);
SuiteResult hyperfinite_sums();
SuiteResult loeb_golden(std::size_t samples = 100, std::uint64_t seed = 7);
SuiteResult overflow();

const std::vector<std::string>& suite_names();
/// samples = 0 keeps the default. UnknownSymbol for an unknown name.
SuiteResult run_suite(std::string_view name, std::size_t samples = 0);

}  // namespace nsa::suites
