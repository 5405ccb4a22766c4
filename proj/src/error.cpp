// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/error.hpp"

#include "soccerdqn/team.hpp"

namespace sdqn {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kContractViolation: return "contract violation";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kCrcMismatch: return "crc mismatch";
    case ErrorCode::kTruncated: return "truncated file";
    case ErrorCode::kInsufficientData: return "insufficient data";
    case ErrorCode::kReplayMismatch: return "replay mismatch";
  }
  return "unknown error";
}

void throw_error(ErrorCode code, const std::string& what) { throw Error(code, what); }

std::string_view to_string(Team t) { return t == Team::kHome ? "home" : "away"; }

std::string_view to_string(Role r) {
  switch (r) {
    case Role::kGoalkeeper: return "GK";
    case Role::kDefender1: return "D1";
    case Role::kDefender2: return "D2";
    case Role::kForward1: return "F1";
    case Role::kForward2: return "F2";
  }
  return "?";
}

}  // namespace sdqn
