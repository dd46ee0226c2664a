#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qot {

enum class ErrorCode {
  Domain,
  Unbounded,
  InvalidMarginal,
  UnknownCost,
  BadParams,
  NonFiniteCost,
  DegenerateMarginal,
  DegenerateDenominator,
  SizeLimit,
  InfeasibleInit,
  SizeMismatch,
  NotSubmodular,
  NotSymmetric,
  HypothesisViolation,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers (and the CLI
/// exit-code mapping) which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace qot
