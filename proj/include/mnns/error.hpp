// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mnns {

/// Failure categories shared by the C++ core and the C API.
enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch = 2,
  domain_escape = 3,   // truncated domain too small for a faithful result
  hypothesis = 4,      // exponent or split hypotheses violated
  convergence = 5,
  io = 6,
  config = 7,
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace mnns
