#include "condreg/error.hpp"

namespace condreg {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::EmptyData: return "empty_data";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::UnknownColumn: return "unknown_column";
    case ErrorCode::DegenerateColumn: return "degenerate_column";
    case ErrorCode::Underdetermined: return "underdetermined";
    case ErrorCode::Collinearity: return "collinearity";
    case ErrorCode::Saturated: return "saturated";
    case ErrorCode::Nesting: return "nesting";
    case ErrorCode::Argument: return "argument";
    case ErrorCode::Scope: return "scope";
    case ErrorCode::NoModel: return "no_model";
    case ErrorCode::DegenerateEllipse: return "degenerate_ellipse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace condreg
