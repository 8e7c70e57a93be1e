#include "mor/errors.h"

namespace mor {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSingularAtFrequency: return "SingularAtFrequency";
    case ErrorCode::kIllPosedLyapunov: return "IllPosedLyapunov";
    case ErrorCode::kRankOutOfRange: return "RankOutOfRange";
    case ErrorCode::kImaginaryAxisPoles: return "ImaginaryAxisPoles";
    case ErrorCode::kNonzeroFeedthrough: return "NonzeroFeedthrough";
    case ErrorCode::kNonRealSampleAtZero: return "NonRealSampleAtZero";
    case ErrorCode::kResidualImaginaryPoles: return "ResidualImaginaryPoles";
    case ErrorCode::kInsufficientSpectrum: return "InsufficientSpectrum";
    case ErrorCode::kSingularW0: return "SingularW0";
    case ErrorCode::kDuplicateSupportPoint: return "DuplicateSupportPoint";
    case ErrorCode::kDegenerateFactors: return "DegenerateFactors";
    case ErrorCode::kSaturated: return "Saturated";
    case ErrorCode::kUnstableInput: return "UnstableInput";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace mor
