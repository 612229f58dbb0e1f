#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "condreg/dataset.hpp"
#include "condreg/ols.hpp"

namespace condreg {

/// Published or computed one-factor constants for a pair (target, other).
struct SlrConstants {
  double a_target = 0.0;           // slope of Y on target
  double a_other = 0.0;            // slope of Y on other
  double c_target_on_other = 0.0;  // slope of target regressed on other
  double c_other_on_target = 0.0;  // slope of other regressed on target
  double r = 0.0;                  // Pearson r(target, other)
};

struct PairCoefficients {
  double b_target = 0.0;
  double b_other = 0.0;
};

/// Two-factor coefficients from one-factor ones:
///   b_target = (a_target - a_other * c_other_on_target) / (1 - r^2)
///   b_other  = (a_other - a_target * c_target_on_other) / (1 - r^2)
/// Throws Error(Collinearity) for |r| == 1.
PairCoefficients reconstruct_two_predictor(const SlrConstants& k);

struct TwoPredictorClosure {
  std::string other;
  PairCoefficients reconstructed;
  double residual_target = 0.0;  // |reconstructed - fitted|
  double residual_other = 0.0;
};

struct BridgeReport {
  std::string target;
  double a = 0.0;  // simple-regression slope of the response on the target
  double b = 0.0;  // multiple-regression coefficient of the target
  std::map<std::string, double> slr_slopes;        // every predictor
  std::map<std::string, double> mlr_coefficients;  // every predictor
  std::map<std::string, double> c_target_on;       // slope of target on x_j
  std::map<std::string, double> c_on_target;       // slope of x_j on target
  std::map<std::string, double> r;                 // r(target, x_j)
  double ac_sum = 0.0;
  bool sign_flip = false;
  std::optional<bool> expectation_violation;
  std::optional<TwoPredictorClosure> closure;
};

/// Fits the simple regressions of the response on each predictor, the
/// predictor-linear multiple regression, and the pairwise inter-predictor
/// regressions, then assembles the report. With exactly two predictors the
/// two-factor reconstruction is checked against the direct fit.
BridgeReport bridge(const Dataset& d, const std::string& response,
                    const std::vector<std::string>& predictors, const std::string& target,
                    std::optional<int> expected_sign = std::nullopt);

/// Same report built from published constants, for use without raw data.
BridgeReport bridge_from_constants(const std::string& target, const std::string& other,
                                   const SlrConstants& k,
                                   std::optional<int> expected_sign = std::nullopt);

struct ResidualizedPredictor {
  std::string name;                    // "<target>*"
  std::vector<double> values;          // target - sum c_j x_j
  double intercept = 0.0;              // of the auxiliary regression
  std::map<std::string, double> slopes;
};

/// Removes from `target` its linear dependence on `others` using the single
/// multiple regression of target on all of them.
ResidualizedPredictor residualize(const Dataset& d, const std::string& target,
                                  const std::vector<std::string>& others);

struct AbbottCarrollResult {
  double ac_sum = 0.0;  // b_target + sum_j b_j * c_{j,target}
  double a = 0.0;       // simple-regression slope of the response on target
  double discrepancy = 0.0;
};

/// Sum over the predictor-linear model Y ~ predictors.
AbbottCarrollResult abbott_carroll(const Dataset& d, const std::string& response,
                                   const std::vector<std::string>& predictors,
                                   const std::string& target);

/// Sum over the linear terms of an already fitted model (which may hold
/// higher-order terms; the identity with `a` is then not expected to hold).
AbbottCarrollResult abbott_carroll(const Dataset& d, const FittedModel& m,
                                   const std::string& target);

enum class FindingKind { SignFlip, ExpectationViolation, StrongCorrelation };

struct ParadoxFinding {
  FindingKind kind;
  std::string predictor;
  std::string message;
};

std::string_view finding_name(FindingKind kind) noexcept;

std::vector<ParadoxFinding> detect_paradox(const BridgeReport& report,
                                           std::optional<int> expected_sign = std::nullopt,
                                           double correlation_threshold = 0.7);

}  // namespace condreg
