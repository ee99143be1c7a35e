#include "ofpca/errors.hpp"

namespace ofpca {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::InvalidObject: return "InvalidObject";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BadWeights: return "BadWeights";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::TooFewTrajectories: return "TooFewTrajectories";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::InvalidSurface: return "InvalidSurface";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::NonIntegrableEigenfunction: return "NonIntegrableEigenfunction";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace ofpca
