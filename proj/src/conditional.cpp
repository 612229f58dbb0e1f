#include "condreg/conditional.hpp"

#include <algorithm>
#include <cmath>

#include "condreg/error.hpp"

namespace condreg {

double ConditionalResponse::evaluate(double v) const noexcept {
  double y = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) y = y * v + *it;
  return y;
}

ConditionalResponse derive(const FittedModel& m, std::string_view target,
                           const Assignment& fixed) {
  const auto predictors = m.spec.predictors();
  if (std::find(predictors.begin(), predictors.end(), target) == predictors.end()) {
    throw Error(ErrorCode::Argument, "target '" + std::string(target) + "' is not in the model");
  }
  for (const auto& [name, value] : fixed) {
    if (name == target) {
      throw Error(ErrorCode::Argument, "target '" + name + "' must not be fixed");
    }
    if (std::find(predictors.begin(), predictors.end(), name) == predictors.end()) {
      throw Error(ErrorCode::Argument, "fixed predictor '" + name + "' is not in the model");
    }
  }
  for (const auto& name : predictors) {
    if (name != target && fixed.find(name) == fixed.end()) {
      throw Error(ErrorCode::Argument, "predictor '" + name + "' needs a fixed value");
    }
  }

  int max_power = 0;
  for (const auto& t : m.spec.terms) max_power = std::max(max_power, t.power_of(target));

  ConditionalResponse out;
  out.target = std::string(target);
  out.fixed = fixed;
  out.poly.assign(static_cast<std::size_t>(max_power) + 1, 0.0);
  out.poly[0] = m.intercept();
  const Eigen::Index offset = m.spec.intercept ? 1 : 0;
  for (std::size_t j = 0; j < m.spec.terms.size(); ++j) {
    const auto& t = m.spec.terms[j];
    double rest = m.coef(offset + static_cast<Eigen::Index>(j));
    for (const auto& f : t.factors()) {
      if (f.predictor == target) continue;
      rest *= std::pow(fixed.find(f.predictor)->second, f.power);
    }
    out.poly[static_cast<std::size_t>(t.power_of(target))] += rest;
  }
  return out;
}

double unit_effect(const FittedModel& m, std::string_view target, const Assignment& fixed,
                   double at) {
  const auto response = derive(m, target, fixed);
  return response.evaluate(at + 1.0) - response.evaluate(at);
}

TCoefficients t_coefficients(const FittedModel& m, std::string_view target,
                             const Assignment& fixed) {
  const auto response = derive(m, target, fixed);
  if (response.degree() > 2) {
    throw Error(ErrorCode::Scope, "model is of degree " + std::to_string(response.degree()) +
                                      " in '" + std::string(target) +
                                      "'; use the full conditional polynomial");
  }
  TCoefficients t;
  t.constant = response.poly[0];
  if (response.poly.size() > 1) t.linear = response.poly[1];
  if (response.poly.size() > 2) t.quadratic = response.poly[2];
  return t;
}

std::vector<std::pair<double, double>> sweep(const ConditionalResponse& response, double lo,
                                             double hi, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::Argument, "sweep needs at least one step");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorCode::Argument, "sweep bounds must be finite");
  std::vector<std::pair<double, double>> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double v = steps == 1 ? lo
                                : lo + (hi - lo) * static_cast<double>(i) /
                                           static_cast<double>(steps - 1);
    out.emplace_back(v, response.evaluate(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

Preset parse_preset(std::string_view text) {
  if (text == "min") return Preset::Min;
  if (text == "q25") return Preset::Q25;
  if (text == "mean") return Preset::Mean;
  if (text == "q75") return Preset::Q75;
  if (text == "max") return Preset::Max;
  throw Error(ErrorCode::Argument, "unknown preset '" + std::string(text) +
                                       "' (expected min, q25, mean, q75 or max)");
}

std::string_view preset_name(Preset preset) noexcept {
  switch (preset) {
    case Preset::Min: return "min";
    case Preset::Q25: return "q25";
    case Preset::Mean: return "mean";
    case Preset::Q75: return "q75";
    case Preset::Max: return "max";
  }
  return "?";
}

double preset_value(const QuartileRow& row, Preset preset) noexcept {
  switch (preset) {
    case Preset::Min: return row.min;
    case Preset::Q25: return row.q25;
    case Preset::Mean: return row.mean;
    case Preset::Q75: return row.q75;
    case Preset::Max: return row.max;
  }
  return row.mean;
}

Assignment resolve_fixed(const std::map<std::string, FixValue, std::less<>>& fixes,
                         const QuartileSummary* summary) {
  Assignment out;
  for (const auto& [name, value] : fixes) {
    if (const auto* number = std::get_if<double>(&value)) {
      out[name] = *number;
      continue;
    }
    const auto preset = std::get<Preset>(value);
    if (summary == nullptr) {
      throw Error(ErrorCode::Argument, "preset '" + std::string(preset_name(preset)) + "' for '" +
                                           name + "' needs data to summarize");
    }
    const QuartileRow* row = nullptr;
    for (const auto& r : summary->rows) {
      if (r.name == name) row = &r;
    }
    if (row == nullptr) {
      throw Error(ErrorCode::Argument, "preset '" + std::string(preset_name(preset)) +
                                           "' refers to absent column '" + name + "'");
    }
    out[name] = preset_value(*row, preset);
  }
  return out;
}

std::vector<CorrelationCaution> correlation_cautions(const ConditionalResponse& response,
                                                     const CorrelationReport& correlations,
                                                     double threshold) {
  std::vector<CorrelationCaution> out;
  const auto& names = correlations.names;
  if (std::find(names.begin(), names.end(), response.target) == names.end()) return out;
  for (const auto& [name, value] : response.fixed) {
    if (std::find(names.begin(), names.end(), name) == names.end()) continue;
    const double r = correlations.r_between(response.target, name);
    if (std::fabs(r) > threshold) out.push_back(CorrelationCaution{name, r});
  }
  return out;
}

}  // namespace condreg
