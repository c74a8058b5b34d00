#pragma once

#include <stdexcept>
#include <string>

namespace spre {

/// Failure categories surfaced by the library. The C API maps these one to one
/// onto `spre_status` values, so the numbering is part of the ABI.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kNotUnisolvent = 3,
  kGramNotPd = 4,
  kNumericalBreakdown = 5,
  kDegenerateScaling = 6,
  kFoldNotUnisolvent = 7,
  kEmptyProposal = 8,
  kNonReciprocalWidth = 9,
  kCoincidentAgents = 10,
  kConfig = 11,
  kIo = 12,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by loocv when removing point `fold` leaves a design that cannot
/// support the index set.
class FoldError : public Error {
 public:
  FoldError(std::size_t fold, const std::string& what)
      : Error(ErrorCode::kFoldNotUnisolvent, what), fold_(fold) {}

  std::size_t fold() const noexcept { return fold_; }

 private:
  std::size_t fold_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace spre
