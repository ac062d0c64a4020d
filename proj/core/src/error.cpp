#include "cbi/error.hpp"

namespace cbi {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::OddGrid: return "OddGrid";
    case ErrorCode::MissingLowerOrder: return "MissingLowerOrder";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NegativeComponent: return "NegativeComponent";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace cbi
