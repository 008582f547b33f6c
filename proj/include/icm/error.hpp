#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace icm {

enum class ErrorCode {
  kInvalidParameter,
  kEmptySample,
  kDegenerateScenario,
  kInsufficientPoints,
  kUnsortedAbscissae,
  kUnknownPreset,
  kMalformedInput,
  kSchemaViolation,
};

/// Every failure in the library is reported through this type. `field()` is
/// the dotted path of the offending input ("negative.scale") when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace icm
