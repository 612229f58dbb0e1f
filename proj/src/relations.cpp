#include "condreg/relations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "condreg/error.hpp"

namespace condreg {
namespace {

// Slope of `y` on `x` with an intercept; a constant x is collinear with it.
double slr_slope(const Dataset& d, const std::string& y, const std::string& x) {
  ModelSpec spec{y, true, {Term::linear(x)}};
  return fit(d, spec).coef(1);
}

ModelSpec linear_model(const std::string& response, const std::vector<std::string>& predictors) {
  ModelSpec spec{response, true, {}};
  for (const auto& p : predictors) spec.terms.push_back(Term::linear(p));
  return spec;
}

void check_predictors(const Dataset& d, const std::string& response,
                      const std::vector<std::string>& predictors, const std::string& target) {
  d.column(response);
  std::set<std::string> seen;
  for (const auto& p : predictors) {
    d.column(p);
    if (!seen.insert(p).second) throw Error(ErrorCode::Argument, "predictor '" + p + "' listed twice");
  }
  if (!seen.count(target)) {
    throw Error(ErrorCode::Argument, "target '" + target + "' is not among the predictors");
  }
}

bool opposite_signs(double x, double y) { return (x > 0.0 && y < 0.0) || (x < 0.0 && y > 0.0); }

std::optional<bool> violates(double b, std::optional<int> expected_sign) {
  if (!expected_sign) return std::nullopt;
  if (*expected_sign != 1 && *expected_sign != -1) {
    throw Error(ErrorCode::Argument, "expected sign must be +1 or -1");
  }
  return b * static_cast<double>(*expected_sign) < 0.0;
}

}  // namespace

PairCoefficients reconstruct_two_predictor(const SlrConstants& k) {
  const double denom = 1.0 - k.r * k.r;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::Collinearity, "predictors are perfectly correlated (|r| = 1)");
  }
  return PairCoefficients{(k.a_target - k.a_other * k.c_other_on_target) / denom,
                          (k.a_other - k.a_target * k.c_target_on_other) / denom};
}

BridgeReport bridge(const Dataset& d, const std::string& response,
                    const std::vector<std::string>& predictors, const std::string& target,
                    std::optional<int> expected_sign) {
  check_predictors(d, response, predictors, target);
  BridgeReport rep;
  rep.target = target;
  for (const auto& p : predictors) rep.slr_slopes[p] = slr_slope(d, response, p);
  const auto mlr = fit(d, linear_model(response, predictors));
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    rep.mlr_coefficients[predictors[j]] = mlr.coef(static_cast<Eigen::Index>(j) + 1);
  }
  rep.a = rep.slr_slopes.at(target);
  rep.b = rep.mlr_coefficients.at(target);
  rep.ac_sum = rep.b;
  for (const auto& p : predictors) {
    if (p == target) continue;
    rep.c_target_on[p] = slr_slope(d, target, p);
    rep.c_on_target[p] = slr_slope(d, p, target);
    rep.r[p] = pearson_r(d.column(target), d.column(p));
    rep.ac_sum += rep.mlr_coefficients.at(p) * rep.c_on_target.at(p);
  }
  rep.sign_flip = opposite_signs(rep.a, rep.b);
  rep.expectation_violation = violates(rep.b, expected_sign);

  if (predictors.size() == 2) {
    const auto& other = predictors[0] == target ? predictors[1] : predictors[0];
    const SlrConstants k{rep.a, rep.slr_slopes.at(other), rep.c_target_on.at(other),
                         rep.c_on_target.at(other), rep.r.at(other)};
    TwoPredictorClosure closure;
    closure.other = other;
    closure.reconstructed = reconstruct_two_predictor(k);
    closure.residual_target = std::fabs(closure.reconstructed.b_target - rep.b);
    closure.residual_other =
        std::fabs(closure.reconstructed.b_other - rep.mlr_coefficients.at(other));
    rep.closure = closure;
  }
  return rep;
}

BridgeReport bridge_from_constants(const std::string& target, const std::string& other,
                                   const SlrConstants& k, std::optional<int> expected_sign) {
  if (target == other) throw Error(ErrorCode::Argument, "target and other predictor coincide");
  const auto b = reconstruct_two_predictor(k);
  BridgeReport rep;
  rep.target = target;
  rep.a = k.a_target;
  rep.b = b.b_target;
  rep.slr_slopes = {{target, k.a_target}, {other, k.a_other}};
  rep.mlr_coefficients = {{target, b.b_target}, {other, b.b_other}};
  rep.c_target_on = {{other, k.c_target_on_other}};
  rep.c_on_target = {{other, k.c_other_on_target}};
  rep.r = {{other, k.r}};
  rep.ac_sum = b.b_target + b.b_other * k.c_other_on_target;
  rep.sign_flip = opposite_signs(rep.a, rep.b);
  rep.expectation_violation = violates(rep.b, expected_sign);
  rep.closure = TwoPredictorClosure{other, b, 0.0, 0.0};
  return rep;
}

ResidualizedPredictor residualize(const Dataset& d, const std::string& target,
                                  const std::vector<std::string>& others) {
  const auto x = d.column(target);
  ResidualizedPredictor out;
  out.name = target + "*";
  out.values.assign(x.begin(), x.end());
  if (others.empty()) return out;
  if (std::find(others.begin(), others.end(), target) != others.end()) {
    throw Error(ErrorCode::Argument, "target '" + target + "' cannot be residualized on itself");
  }
  const auto aux = fit(d, linear_model(target, others));
  out.intercept = aux.coef(0);
  for (std::size_t j = 0; j < others.size(); ++j) {
    const double c = aux.coef(static_cast<Eigen::Index>(j) + 1);
    out.slopes[others[j]] = c;
    const auto xj = d.column(others[j]);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= c * xj[i];
  }
  return out;
}

AbbottCarrollResult abbott_carroll(const Dataset& d, const std::string& response,
                                   const std::vector<std::string>& predictors,
                                   const std::string& target) {
  check_predictors(d, response, predictors, target);
  return abbott_carroll(d, fit(d, linear_model(response, predictors)), target);
}

AbbottCarrollResult abbott_carroll(const Dataset& d, const FittedModel& m,
                                   const std::string& target) {
  const auto target_term = Term::linear(target);
  if (!m.spec.contains(target_term)) {
    throw Error(ErrorCode::Argument, "model has no linear term for '" + target + "'");
  }
  AbbottCarrollResult out;
  out.ac_sum = m.coefficient(target_term);
  for (const auto& t : m.spec.terms) {
    if (!t.is_linear() || t == target_term) continue;
    const auto& other = t.factors().front().predictor;
    out.ac_sum += m.coefficient(t) * slr_slope(d, other, target);
  }
  out.a = slr_slope(d, m.spec.response, target);
  out.discrepancy = std::fabs(out.ac_sum - out.a);
  return out;
}

std::string_view finding_name(FindingKind kind) noexcept {
  switch (kind) {
    case FindingKind::SignFlip: return "sign_flip";
    case FindingKind::ExpectationViolation: return "expectation_violation";
    case FindingKind::StrongCorrelation: return "strong_correlation";
  }
  return "?";
}

std::vector<ParadoxFinding> detect_paradox(const BridgeReport& report,
                                           std::optional<int> expected_sign,
                                           double correlation_threshold) {
  std::vector<ParadoxFinding> out;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  auto flip = [&](const std::string& name, double a, double b) {
    if (opposite_signs(a, b)) {
      out.push_back({FindingKind::SignFlip, name,
                     "simple slope " + fmt(a) + " and multiple coefficient " + fmt(b) +
                         " have opposite signs"});
    }
  };
  flip(report.target, report.a, report.b);
  for (const auto& [name, b] : report.mlr_coefficients) {
    const auto a = report.slr_slopes.find(name);
    if (name != report.target && a != report.slr_slopes.end()) flip(name, a->second, b);
  }
  std::optional<bool> violation = report.expectation_violation;
  if (expected_sign) violation = violates(report.b, expected_sign);
  if (violation.value_or(false)) {
    out.push_back({FindingKind::ExpectationViolation, report.target,
                   "coefficient " + fmt(report.b) + " contradicts the expected sign"});
  }
  const std::pair<const std::string, double>* strongest = nullptr;
  for (const auto& entry : report.r) {
    if (strongest == nullptr || std::fabs(entry.second) > std::fabs(strongest->second)) {
      strongest = &entry;
    }
  }
  if (strongest != nullptr && std::fabs(strongest->second) > correlation_threshold) {
    out.push_back({FindingKind::StrongCorrelation, strongest->first,
                   "r(" + report.target + ", " + strongest->first + ") = " +
                       fmt(strongest->second) + " exceeds " + fmt(correlation_threshold)});
  }
  return out;
}

}  // namespace condreg
