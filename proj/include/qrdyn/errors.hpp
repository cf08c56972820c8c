#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrdyn {

enum class ErrorCode {
  InvalidArgument,
  PoleAt,
  Unresolved,
  BudgetExceeded,
  SingularMatrix,
  OrbitHitOrigin,
  DegenerateIntervals,
  BranchLoss,
  NonContraction,
  InversionFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleAt: return "PoleAt";
    case ErrorCode::Unresolved: return "Unresolved";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::OrbitHitOrigin: return "OrbitHitOrigin";
    case ErrorCode::DegenerateIntervals: return "DegenerateIntervals";
    case ErrorCode::BranchLoss: return "BranchLoss";
    case ErrorCode::NonContraction: return "NonContraction";
    case ErrorCode::InversionFailure: return "InversionFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace qrdyn
