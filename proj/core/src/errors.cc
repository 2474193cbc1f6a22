#include "mrss/errors.h"

namespace mrss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::kNoCommonGrid: return "NoCommonGrid";
    case ErrorCode::kInconsistentObservations: return "InconsistentObservations";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnsupportedSupport: return "UnsupportedSupport";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kNoCertificate: return "NoCertificate";
    case ErrorCode::kDegenerateCertificate: return "DegenerateCertificate";
    case ErrorCode::kIllConditioned: return "IllConditioned";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace mrss
