#include "dnde/error.hpp"

namespace dnde {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateB: return "DegenerateB";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorKind::OutOfRangeRegime: return "OutOfRangeRegime";
    case ErrorKind::RangeMismatch: return "RangeMismatch";
    case ErrorKind::NonPositiveTime: return "NonPositiveTime";
    case ErrorKind::OutsideSupport: return "OutsideSupport";
    case ErrorKind::BadMesh: return "BadMesh";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::BadOption: return "BadOption";
    case ErrorKind::StagnantState: return "StagnantState";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorKind::MismatchedStates: return "MismatchedStates";
    case ErrorKind::EmptyDensity: return "EmptyDensity";
    case ErrorKind::TooFewRecords: return "TooFewRecords";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace dnde
