#include "navrl/error.hpp"

namespace navrl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::PlacementFailed: return "PlacementFailed";
    case ErrorCode::EpisodeFinished: return "EpisodeFinished";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidArchitecture: return "InvalidArchitecture";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::TagMismatch: return "TagMismatch";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidReference: return "InvalidReference";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IncompatibleCheckpoint: return "IncompatibleCheckpoint";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace navrl
