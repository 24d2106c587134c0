#pragma once

#include <stdexcept>
#include <string>

namespace repbasis {

// Error codes shared with the C API (include/repbasis.h mirrors the values).
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  AlphaOutOfRange = 2,
  KTooSmall = 3,
  NTooSmall = 4,
  EtaNegative = 5,
  EpsNegative = 6,
  XiNotPositive = 7,
  LambdaNotPositive = 8,
  XiEpsConstraint = 9,
  EmptyWindow = 10,
  POutOfRange = 11,
  MembersInvalid = 12,
  CountOverflow = 13,
  BudgetExceeded = 14,
  CapExceeded = 15,
  NCapExceeded = 16,
  NoLowerRoot = 17,
  CjTooSmall = 18,
  TrialsTooSmall = 19,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace repbasis
