#pragma once

#include <stdexcept>
#include <string>

namespace dnde {

enum class ErrorKind {
  DegenerateB,
  BadExponent,
  NonPositiveArgument,
  OutOfRangeRegime,
  RangeMismatch,
  NonPositiveTime,
  OutsideSupport,
  BadMesh,
  LengthMismatch,
  BadOption,
  StagnantState,
  NonFiniteState,
  StepBudgetExceeded,
  MismatchedStates,
  EmptyDensity,
  TooFewRecords,
  ConfigError,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers
// map them onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dnde
