#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdlab {

enum class ErrorCode {
  NonSquare,
  TooFarFromHermitian,
  ConvergenceFailure,
  UnsupportedP,
  DimMismatch,
  NotOrthonormal,
  NotProjection,
  NotQuantumColoring,
  InvalidSetSystem,
  InvalidColoring,
  GroundSetTooLarge,
  DegenerateM,
  SpectrumOutOfRange,
  IndexOutOfRange,
  NumericalBreakdown,
  EmptyRestriction,
  KernelInvalid,
  DegenerateDim,
  RankMismatch,
  NonPositiveT,
  InvalidArgument,
  ConditionViolated,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; `code()` carries the
// machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qdlab
