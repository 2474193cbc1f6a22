#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrss {

enum class ErrorCode {
  kInvalidInput,
  kParseError,
  kArithmeticOverflow,
  kNoCommonGrid,
  kInconsistentObservations,
  kNotHermitian,
  kDimensionMismatch,
  kUnsupportedSupport,
  kNumericalBreakdown,
  kNoCertificate,
  kDegenerateCertificate,
  kIllConditioned,
};

/// Stable machine-readable name, e.g. "NoCommonGrid".
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mrss
