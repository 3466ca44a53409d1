#pragma once

#include <stdexcept>
#include <string>

namespace koman {

enum class ErrorCode {
  Syntax,
  Validation,
  SizeLimitExceeded,
  BadParameter,
  UnknownWinner,
  IncompleteRound,
  DoubleThrow,
  LevelMismatch,
  MissingRoleAnnotations,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace koman
