#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "condreg/dataset.hpp"
#include "condreg/ols.hpp"

namespace condreg {

/// Level-q region {p : (p - center)' shape^-1 (p - center) <= threshold} with
/// center and shape from sample moments and threshold the chi-square(2)
/// quantile at `level`.
struct ConfidenceEllipse {
  std::string x_name;
  std::string y_name;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Eigen::Matrix2d shape = Eigen::Matrix2d::Identity();
  double level = 0.0;
  double threshold = 0.0;

  double mahalanobis2(const Eigen::Vector2d& point) const;
  bool contains(const Eigen::Vector2d& point) const { return mahalanobis2(point) <= threshold; }
  /// Closed polyline of `points` boundary vertices (first vertex not repeated).
  std::vector<Eigen::Vector2d> boundary(std::size_t points = 360) const;
  /// sqrt(1 - minor^2 / major^2); 0 for a circle, approaching 1 as the
  /// ellipse thins out.
  double eccentricity() const;
};

/// Throws Error(DegenerateEllipse) for a singular sample covariance and
/// Error(Argument) for n < 3 or a level outside (0, 1).
ConfidenceEllipse ellipse(const Dataset& d, const std::string& x, const std::string& y,
                          double level);

enum class Region { Inside, Outside };

/// Inside marks the interpolation region; Outside is extrapolation.
Region classify_point(const ConfidenceEllipse& e, const Eigen::Vector2d& point);
std::string_view region_name(Region region) noexcept;

enum class ActionLabel { Additive, LessThanAdditive, GreaterThanAdditive, Antagonism };
std::string_view action_name(ActionLabel label) noexcept;

struct ActionOptions {
  double alpha = 0.05;
  /// Low (zero-dose) and high levels of each factor. Coded designs use -1/+1.
  std::pair<double, double> levels1{-1.0, 1.0};
  std::pair<double, double> levels2{-1.0, 1.0};
  /// Values for any other predictors in the model.
  Assignment others;
  /// Joint response within this fraction of the corner response range from
  /// the control counts as restored to control.
  double control_tolerance = 0.05;
};

struct ActionClass {
  ActionLabel label = ActionLabel::Additive;
  double cross_coef = 0.0;
  std::optional<double> cross_p;  // nullopt when the model carries no p-values
  double main1 = 0.0;             // linear coefficients
  double main2 = 0.0;
  double control = 0.0;           // response at (low, low)
  double effect1 = 0.0;           // Y(high, low) - control
  double effect2 = 0.0;           // Y(low, high) - control
  double joint = 0.0;             // Y(high, high) - control
  double interaction = 0.0;       // joint - effect1 - effect2
  double response_range = 0.0;    // spread of the four corner responses
};

/// Reads the combined action of f1 and f2 off a model holding both linear
/// terms and their product:
///  - cross p-value above alpha: additive;
///  - single-factor effects sharing a direction and the interaction opposing
///    it: antagonism when the joint response returns to the control level,
///    less-than-additive otherwise;
///  - interaction along that direction: greater-than-additive.
/// Without a p-value the cross term is treated as significant.
/// Throws Error(Scope) when a required term is missing.
ActionClass classify_action(const FittedModel& m, const std::string& f1, const std::string& f2,
                            const ActionOptions& options = {});

}  // namespace condreg
