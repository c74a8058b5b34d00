#include "spre/error.hpp"

namespace spre {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotUnisolvent: return "NotUnisolvent";
    case ErrorCode::kGramNotPd: return "GramNotPD";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kDegenerateScaling: return "DegenerateScaling";
    case ErrorCode::kFoldNotUnisolvent: return "FoldNotUnisolvent";
    case ErrorCode::kEmptyProposal: return "EmptyProposal";
    case ErrorCode::kNonReciprocalWidth: return "NonReciprocalWidth";
    case ErrorCode::kCoincidentAgents: return "CoincidentAgents";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace spre
