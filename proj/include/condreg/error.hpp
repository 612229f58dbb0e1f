#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace condreg {

enum class ErrorCode {
  Parse,              // malformed CSV or formula text
  EmptyData,          // no usable rows
  Schema,             // duplicate / empty column names
  UnknownColumn,
  DegenerateColumn,   // zero-variance column where variance is required
  Underdetermined,    // more parameters than observations
  Collinearity,       // rank-deficient design
  Saturated,          // no residual degrees of freedom
  Nesting,            // non-nested model comparison
  Argument,
  Scope,              // operation not defined for this model shape
  NoModel,            // search produced nothing fittable
  DegenerateEllipse,
  Io,
};

/// Stable machine-readable name, e.g. "collinearity".
std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace condreg
