#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ofpca {

enum class ErrorCode {
  SpaceMismatch,
  InvalidObject,
  EmptyInput,
  BadWeights,
  IndexError,
  TooFewTrajectories,
  DegenerateVariance,
  BadRank,
  InvalidSurface,
  DegenerateSpectrum,
  NonIntegrableEigenfunction,
  SchemaError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ofpca
