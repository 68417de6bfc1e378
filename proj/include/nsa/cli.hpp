#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nsa/filters.hpp"

namespace nsa::cli {

enum ExitCode { Ok = 0, SuiteFailed = 1, Usage = 2, NeedsCommitment = 3, DomainError = 4 };

/// Oracle commitments, configuration and named expressions, persisted as JSON:
/// {"commitments":[{"mod":k,"res":r},...],"config":{"horizon":H},"bindings":{"x":"w + 1"}}
struct Session {
  std::map<std::uint64_t, std::uint64_t> commitments;
  std::uint64_t horizon = 10000;
  std::map<std::string, std::string> bindings;

  /// A missing file gives the empty session.
  static Session load(const std::string& path);
  void save(const std::string& path) const;
  std::string to_json() const;
  static Session from_json(const std::string& text);

  /// Replays the commitments into a fresh oracle.
  filters::UltrafilterOracle oracle(filters::Policy policy) const;
};

/// Runs one command line (args excludes the program name). Human text or, with --json,
/// one Report object goes to out; diagnostics go to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsa::cli
