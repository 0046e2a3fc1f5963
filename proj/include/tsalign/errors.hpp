#pragma once

#include <stdexcept>
#include <string>

namespace tsalign {

enum class ErrorCode {
  MalformedRow,
  InconsistentChannels,
  UnknownLabel,
  EmptyDataset,
  IoFailure,
  InvalidSpec,
  InsufficientLength,
  EmptySeries,
  EmptyMatrix,
  DimensionMismatch,
  RankTooSmall,
  DegenerateInput,
  KTooLarge,
  ClassTooSmall,
  EmptyGrid,
};

const char* to_string(ErrorCode code);

/// All library failures surface as this exception; `code()` identifies the
/// condition so callers can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tsalign
