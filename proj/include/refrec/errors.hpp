#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace refrec {

enum class ErrorCode {
  ParseError,
  ZeroPolynomial,
  InexactDivision,
  ZeroOperator,
  DegenerateReduction,
  SingularCasoratian,
  SingularConditions,
  ConditionCountMismatch,
  VerificationFailed,
  NoConvergence,
  SingularBlock,
  SingularK,
  SingularZ,
  DegenerateLeading,
  UnrepresentableTerm,
  SingularWindowSystem,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Every solver failure is reported through this exception; the code is what
/// callers (and the CLI exit-status mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::InexactDivision: return "InexactDivision";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::DegenerateReduction: return "DegenerateReduction";
    case ErrorCode::SingularCasoratian: return "SingularCasoratian";
    case ErrorCode::SingularConditions: return "SingularConditions";
    case ErrorCode::ConditionCountMismatch: return "ConditionCountMismatch";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::SingularK: return "SingularK";
    case ErrorCode::SingularZ: return "SingularZ";
    case ErrorCode::DegenerateLeading: return "DegenerateLeading";
    case ErrorCode::UnrepresentableTerm: return "UnrepresentableTerm";
    case ErrorCode::SingularWindowSystem: return "SingularWindowSystem";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace refrec
