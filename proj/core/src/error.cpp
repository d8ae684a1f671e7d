#include "cayspec/error.hpp"

namespace cayspec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::UnsupportedParameter: return "UnsupportedParameter";
    case ErrorCode::NotAbelian: return "NotAbelian";
    case ErrorCode::InconsistentSamples: return "InconsistentSamples";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SizeCap: return "SizeCap";
    case ErrorCode::NotACell: return "NotACell";
    case ErrorCode::NotADivisor: return "NotADivisor";
    case ErrorCode::NotASubgroup: return "NotASubgroup";
    case ErrorCode::EnumerationCap: return "EnumerationCap";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_computational(ErrorCode code) noexcept {
  return code == ErrorCode::NoConvergence || code == ErrorCode::SizeCap ||
         code == ErrorCode::EnumerationCap || code == ErrorCode::InconsistentSamples;
}

}  // namespace cayspec
