#include "tsalign/errors.hpp"

namespace tsalign {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::InconsistentChannels: return "InconsistentChannels";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InsufficientLength: return "InsufficientLength";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankTooSmall: return "RankTooSmall";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
  }
  return "UnknownError";
}

}  // namespace tsalign
