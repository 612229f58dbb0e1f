#pragma once

#include <string>
#include <string_view>

#include "condreg/terms.hpp"

namespace condreg {

/// Maximum total degree accepted by the formula language.
inline constexpr int kMaxFormulaDegree = 3;

/// Parses "Y ~ x1 + x2 + x1:x2 + x1^2". ':' is a product, '^k' a power
/// (k <= 3), quad(a, b, ...) the full quadratic in the listed predictors.
/// "0 +" or "- 1" drops the intercept. Throws Error(Parse).
ModelSpec parse_formula(std::string_view text);

/// Canonical text; parse_formula(print_formula(s)) == s.
std::string print_formula(const ModelSpec& spec);

/// Parses a single term such as "x1:x2" or "x3^2".
Term parse_term(std::string_view text);

}  // namespace condreg
