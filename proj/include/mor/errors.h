#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mor {

/// Failure categories raised by the library. Each maps to one documented
/// error condition of an operation; the CLI folds them into exit codes.
enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kSingularAtFrequency,
  kIllPosedLyapunov,
  kRankOutOfRange,
  kImaginaryAxisPoles,
  kNonzeroFeedthrough,
  kNonRealSampleAtZero,
  kResidualImaginaryPoles,
  kInsufficientSpectrum,
  kSingularW0,
  kDuplicateSupportPoint,
  kDegenerateFactors,
  kSaturated,
  kUnstableInput,
  kParseError,
};

std::string_view ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ToString(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mor
