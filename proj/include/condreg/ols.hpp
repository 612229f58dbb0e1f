#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "condreg/dataset.hpp"
#include "condreg/terms.hpp"

namespace condreg {

struct FitOptions {
  /// Accept dof == 0 (exact fit); inference fields are then NaN.
  bool allow_exact_fit = false;
  /// Relative pivot threshold of the column-pivoted QR.
  double rank_tolerance = 1e-10;
};

/// Fitted least-squares model. Coefficient vectors follow
/// ModelSpec::coefficient_labels(). When `has_inference` is false (exact
/// fit, or coefficients supplied by hand) se/t/p and the covariance are NaN.
struct FittedModel {
  ModelSpec spec;
  std::vector<std::string> labels;
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  Eigen::VectorXd t;
  Eigen::VectorXd p;
  Eigen::MatrixXd cov;
  Eigen::VectorXd residuals;
  double r2 = 0.0;
  double r2_adj = 0.0;
  double rss = 0.0;
  double tss = 0.0;
  double sigma2 = 0.0;
  std::size_t n = 0;
  long dof = 0;
  bool has_inference = false;
  bool from_data = false;

  double coefficient(const Term& term) const;
  /// Coefficient of the term, or 0 when the model does not contain it.
  double coefficient_or_zero(const Term& term) const noexcept;
  double intercept() const noexcept { return spec.intercept ? coef(0) : 0.0; }
  /// p-value of the term; nullopt when the model carries no inference.
  std::optional<double> p_value(const Term& term) const;
};

/// Ordinary least squares via column-pivoted Householder QR.
/// Errors: Collinearity (names a dependent column), Underdetermined,
/// Saturated (dof < 1 unless allow_exact_fit and dof == 0).
FittedModel fit(const Dataset& d, const ModelSpec& spec, const FitOptions& options = {});

/// Wraps published coefficients (intercept first) so that prediction and the
/// interpretation routines can run without raw data. Optional p-values attach
/// to the same positions.
FittedModel from_coefficients(ModelSpec spec, std::vector<double> coefficients,
                              std::optional<std::vector<double>> p_values = std::nullopt);

/// b0 + sum of coef * term value. Throws Error(Argument) when a predictor of
/// the model is missing from `point`.
double predict(const FittedModel& m, const Assignment& point);

struct NestedComparison {
  double delta_r2 = 0.0;   // r2(larger) - r2(smaller)
  double delta_rss = 0.0;  // rss(smaller) - rss(larger)
  long delta_dof = 0;      // dof(smaller) - dof(larger)
};

/// Compares a model with a larger one containing all of its terms.
/// Throws Error(Nesting) when the specs are not nested or were fitted to
/// different responses or sample sizes.
NestedComparison compare(const FittedModel& smaller, const FittedModel& larger);

/// Slope and intercept of the simple regression of y on x.
struct SimpleFit {
  double intercept = 0.0;
  double slope = 0.0;
};
SimpleFit simple_regression(std::span<const double> x, std::span<const double> y);

}  // namespace condreg
