#pragma once

#include <stdexcept>
#include <string>

namespace nlcd {

// Stable error codes; tests match on code(), messages are free-form.
enum class ErrorCode {
  NonSymmetricKernel,
  NegativeKernel,
  NonUnitMass,
  InfiniteSecondMoment,
  SpacingTooCoarse,
  BadDomain,
  NotMonotone,
  TailsTooFat,
  DegenerateRiemann,
  GridMismatch,
  WrongKernel,
  SingularSolve,
  NonpositiveTime,
  BadP,
  TooFewPoints,
  NonpositiveError,
  DegenerateDenominator,
  BlowUp,
  FanHitBoundary,
  MismatchedRuns,
  WindowTooShort,
  ConfigParse,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlcd
