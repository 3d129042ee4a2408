#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdyn {

enum class ErrorCode {
  InvalidSpec,
  NonInjectiveBranch,
  OutOfDomain,
  NotAffineFamily,
  IdentityComposition,
  NotACycle,
  TooShort,
  DepthExhausted,
  PreconditionUnmet,
  WindowTooSmall,
  NotClosedSystem,
  DomainMismatch,
  WindowMismatch,
  OrbitConditionFailed,
  Parse,
  Io,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cdyn
