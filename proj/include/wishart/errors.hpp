#pragma once

#include <stdexcept>
#include <string>

namespace wishart {

enum class ErrorCode {
  NonPositiveEigenvalue,
  BadBeta,
  DimensionMismatch,
  UnsupportedRegime,
  DegenerateEigenvalues,
  NegativeDensity,
  ExtrapolationDiverged,
  SingularPrefactor,
  Overflow,
  ZeroArgument,
  NotConverged,
  CostGuard,
  BranchTrackingFailure,
  SingularityOnNode,
  EigSolverFailure,
  EmptyRange,
  DisjointSupports,
  BadConfig,
  IoError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wishart
