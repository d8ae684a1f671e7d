#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cayspec {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotAGroup,
  OrderTooLarge,
  UnsupportedParameter,
  NotAbelian,
  InconsistentSamples,
  NoConvergence,
  SizeCap,
  NotACell,
  NotADivisor,
  NotASubgroup,
  EnumerationCap,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures of a computation on valid input (caps, iteration limits).
bool is_computational(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace cayspec
