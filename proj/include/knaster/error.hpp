#pragma once

#include <stdexcept>
#include <string>

namespace knaster {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  NotHomeomorphism,
  NotOpen,
  DegreeMismatch,
  SignatureMismatch,
  Precondition,
  NoWitness,
  IterationCap,
  Parse,
  VerificationFailed,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so the C API can map it
// to a status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace knaster
