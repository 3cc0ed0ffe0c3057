#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace convspec {

enum class ErrorCode {
  kDimensionMismatch,
  kPadMismatch,
  kFilterExceedsInput,
  kNonFinite,
  kInvalidArgument,
  kUnsupportedStride,
  kGridTooSmall,
  kSizeCapExceeded,
  kNoConvergence,
  kDegenerateTopSingularValue,
  kParse,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so the
// CLI can map it onto a process exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace convspec
