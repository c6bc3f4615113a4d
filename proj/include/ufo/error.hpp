#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ufo {

enum class ErrorCode {
  InvalidArgument,
  FileUnreadable,
  DecodeError,
  UnsupportedBitDepth,
  EmptyImage,
  ImageTooSmall,
  DimensionMismatch,
  OutOfBounds,
  NotNormalized,
  NonFinite,
  InsufficientPatches,
  ZeroVariance,
  UnknownFrame,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as ufo::Error; code() lets callers branch
// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ufo
