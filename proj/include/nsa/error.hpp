#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nsa {

enum class ErrorKind {
  ParseError,
  ArityError,
  UnknownSymbol,
  InvalidArgument,
  DivisionByZero,
  InfiniteNumber,
  SameGalaxy,
  NeedCommitment,
  IncoherentCommitment,
  NotAnIdeal,
  NotAMeasure,
  DivisionByZeroClass,
  EmptyChainLevel,
  NotDecreasing,
  NonIntegralExponent,
  InfiniteQuantifierRange,
  WitnessNotTotal,
  CounterexampleFound,
  SizeExplosion,
  NotInUniverse,
  NotASentence,
  RankHeterogeneousFamily,
  AxiomViolation,
  EmptySet,
  NotCertifiedInteger,
  UnsupportedTermClass,
  PreconditionFailed,
  NotPointwiseInfinitesimal,
  UnsupportedFunctionClass,
  InfiniteIntegral,
  NotMonotone,
};

std::string_view error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_kind_name(kind)) +
                           (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an oracle decision depends on a residue that is not committed yet.
class NeedCommitment : public Error {
 public:
  explicit NeedCommitment(std::uint64_t modulus)
      : Error(ErrorKind::NeedCommitment, "mod " + std::to_string(modulus)),
        modulus_(modulus) {}
  std::uint64_t modulus() const noexcept { return modulus_; }

 private:
  std::uint64_t modulus_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& detail = {}) {
  throw Error(k, detail);
}

}  // namespace nsa
