// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sdqn {

/// Error classes surfaced through the C API as distinct status codes.
enum class ErrorCode {
  kContractViolation = 1,
  kInvalidArgument,
  kIo,
  kParse,
  kBadMagic,
  kVersionMismatch,
  kCrcMismatch,
  kTruncated,
  kInsufficientData,
  kReplayMismatch,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& what);

inline void require(bool condition, const char* what) {
  if (!condition) throw_error(ErrorCode::kContractViolation, what);
}

}  // namespace sdqn
