#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cosetring {

enum class ErrorCode {
  InvalidArgument,
  GroupMismatch,
  DomainMismatch,
  AmbiguousRounding,
  CapExceeded,
  NotDissociated,
  EmptyLevelSet,
  NotFound,
  IterationBudgetExceeded,
  NonRegularInput,
  EmptySpectrum,
  BudgetExceeded,
  NotConnected,
  ZeroSupport,
  SplitFailed,
  ModulusTooSmall,
  CertificateViolation,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::AmbiguousRounding: return "AmbiguousRounding";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotDissociated: return "NotDissociated";
    case ErrorCode::EmptyLevelSet: return "EmptyLevelSet";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IterationBudgetExceeded: return "IterationBudgetExceeded";
    case ErrorCode::NonRegularInput: return "NonRegularInput";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::ZeroSupport: return "ZeroSupport";
    case ErrorCode::SplitFailed: return "SplitFailed";
    case ErrorCode::ModulusTooSmall: return "ModulusTooSmall";
    case ErrorCode::CertificateViolation: return "CertificateViolation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by the concentration pipeline; carries the dissociated m-subset
// (element indices) that has no further element of A in its span.
class NotConnectedError : public Error {
 public:
  NotConnectedError(std::vector<std::size_t> refuting, const std::string& what)
      : Error(ErrorCode::NotConnected, what), refuting_(std::move(refuting)) {}

  const std::vector<std::size_t>& refuting_subset() const noexcept { return refuting_; }

 private:
  std::vector<std::size_t> refuting_;
};

namespace detail {
inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}
}  // namespace detail

}  // namespace cosetring
