#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "condreg/dataset.hpp"
#include "condreg/ols.hpp"

namespace condreg {

/// Univariate polynomial obtained by holding every other predictor of a model
/// fixed: Y(target | fixed) = poly[0] + poly[1] * v + poly[2] * v^2 + ...
struct ConditionalResponse {
  std::string target;
  Assignment fixed;
  std::vector<double> poly;

  int degree() const noexcept { return static_cast<int>(poly.size()) - 1; }
  double evaluate(double v) const noexcept;
};

/// Substitutes `fixed` into every term and collects powers of `target`.
/// `fixed` must cover every other predictor of the model exactly; a missing,
/// unknown, or target-valued entry raises Error(Argument).
ConditionalResponse derive(const FittedModel& m, std::string_view target, const Assignment& fixed);

/// Y(at + 1) - Y(at) along the conditional response.
double unit_effect(const FittedModel& m, std::string_view target, const Assignment& fixed,
                   double at);

struct TCoefficients {
  double constant = 0.0;   // T0
  double linear = 0.0;     // T_i
  double quadratic = 0.0;  // T_ii
};

/// Named decomposition for models at most quadratic in the target; higher
/// powers raise Error(Scope) and callers should use derive() directly.
TCoefficients t_coefficients(const FittedModel& m, std::string_view target,
                             const Assignment& fixed);

/// Evenly spaced (v, Y(v)) pairs from lo to hi inclusive.
std::vector<std::pair<double, double>> sweep(const ConditionalResponse& response, double lo,
                                             double hi, std::size_t steps);

// ---------------------------------------------------------------------------
// Fixed-value presets

enum class Preset { Min, Q25, Mean, Q75, Max };

/// "min", "q25", "mean", "q75", "max"; throws Error(Argument) otherwise.
Preset parse_preset(std::string_view text);
std::string_view preset_name(Preset preset) noexcept;
double preset_value(const QuartileRow& row, Preset preset) noexcept;

using FixValue = std::variant<double, Preset>;

/// Resolves numbers and presets into a plain assignment. Presets need a
/// summary row for the predictor; otherwise Error(Argument).
Assignment resolve_fixed(const std::map<std::string, FixValue, std::less<>>& fixes,
                         const QuartileSummary* summary);

/// A fixed predictor strongly correlated with the target: holding it fixed
/// while moving the target describes an improbable region of the data.
struct CorrelationCaution {
  std::string predictor;
  double r = 0.0;
};

std::vector<CorrelationCaution> correlation_cautions(const ConditionalResponse& response,
                                                     const CorrelationReport& correlations,
                                                     double threshold = 0.7);

}  // namespace condreg
