#include "condreg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "condreg/distributions.hpp"
#include "condreg/error.hpp"

namespace condreg {

double ConfidenceEllipse::mahalanobis2(const Eigen::Vector2d& point) const {
  const Eigen::Vector2d d = point - center;
  return d.dot(shape.ldlt().solve(d));
}

std::vector<Eigen::Vector2d> ConfidenceEllipse::boundary(std::size_t points) const {
  const Eigen::Matrix2d l = shape.llt().matrixL();
  const double radius = std::sqrt(threshold);
  std::vector<Eigen::Vector2d> out;
  out.reserve(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
    out.push_back(center + radius * l * Eigen::Vector2d(std::cos(theta), std::sin(theta)));
  }
  return out;
}

double ConfidenceEllipse::eccentricity() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(shape);
  const auto values = eig.eigenvalues();  // ascending
  return std::sqrt(std::max(0.0, 1.0 - values(0) / values(1)));
}

ConfidenceEllipse ellipse(const Dataset& d, const std::string& x, const std::string& y,
                          double level) {
  if (d.rows() < 3) throw Error(ErrorCode::Argument, "ellipse needs n >= 3");
  ConfidenceEllipse e;
  e.x_name = x;
  e.y_name = y;
  e.level = level;
  e.threshold = dist::chi_square2_quantile(level);
  const auto xs = d.vector(x);
  const auto ys = d.vector(y);
  const double n = static_cast<double>(d.rows());
  e.center = {xs.mean(), ys.mean()};
  const Eigen::ArrayXd dx = xs.array() - e.center(0);
  const Eigen::ArrayXd dy = ys.array() - e.center(1);
  const double sxx = (dx * dx).sum() / (n - 1.0);
  const double syy = (dy * dy).sum() / (n - 1.0);
  const double sxy = (dx * dy).sum() / (n - 1.0);
  e.shape << sxx, sxy, sxy, syy;
  if (!(sxx > 0.0) || !(syy > 0.0) || sxx * syy - sxy * sxy <= 1e-12 * sxx * syy) {
    throw Error(ErrorCode::DegenerateEllipse,
                "sample covariance of (" + x + ", " + y + ") is singular");
  }
  return e;
}

Region classify_point(const ConfidenceEllipse& e, const Eigen::Vector2d& point) {
  return e.contains(point) ? Region::Inside : Region::Outside;
}

std::string_view region_name(Region region) noexcept {
  return region == Region::Inside ? "inside" : "outside";
}

std::string_view action_name(ActionLabel label) noexcept {
  switch (label) {
    case ActionLabel::Additive: return "additive";
    case ActionLabel::LessThanAdditive: return "less-than-additive";
    case ActionLabel::GreaterThanAdditive: return "greater-than-additive";
    case ActionLabel::Antagonism: return "antagonism";
  }
  return "?";
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ActionClass classify_action(const FittedModel& m, const std::string& f1, const std::string& f2,
                            const ActionOptions& options) {
  if (f1 == f2) throw Error(ErrorCode::Argument, "the two factors must differ");
  const auto lin1 = Term::linear(f1);
  const auto lin2 = Term::linear(f2);
  const auto cross = Term::product({f1, f2});
  for (const auto* t : {&lin1, &lin2, &cross}) {
    if (!m.spec.contains(*t)) {
      throw Error(ErrorCode::Scope, "combined action needs term '" + t->label() + "' in the model");
    }
  }
  if (!(options.levels1.first < options.levels1.second) ||
      !(options.levels2.first < options.levels2.second)) {
    throw Error(ErrorCode::Argument, "factor levels must satisfy low < high");
  }

  auto at = [&](double v1, double v2) {
    Assignment point = options.others;
    point[f1] = v1;
    point[f2] = v2;
    return predict(m, point);
  };
  const auto [lo1, hi1] = options.levels1;
  const auto [lo2, hi2] = options.levels2;
  const double y00 = at(lo1, lo2);
  const double y10 = at(hi1, lo2);
  const double y01 = at(lo1, hi2);
  const double y11 = at(hi1, hi2);

  ActionClass out;
  out.cross_coef = m.coefficient(cross);
  out.cross_p = m.p_value(cross);
  out.main1 = m.coefficient(lin1);
  out.main2 = m.coefficient(lin2);
  out.control = y00;
  out.effect1 = y10 - y00;
  out.effect2 = y01 - y00;
  out.joint = y11 - y00;
  out.interaction = out.joint - out.effect1 - out.effect2;
  out.response_range = std::max({y00, y10, y01, y11}) - std::min({y00, y10, y01, y11});

  if (out.cross_p && *out.cross_p > options.alpha) {
    out.label = ActionLabel::Additive;
    return out;
  }
  const int s1 = sign(out.effect1);
  const int s2 = sign(out.effect2);
  const int si = sign(out.interaction);
  if (si == 0) {
    out.label = ActionLabel::Additive;
  } else if (s1 != 0 && s1 == s2) {
    if (si == -s1) {
      const bool restored =
          std::fabs(out.joint) <= options.control_tolerance * out.response_range;
      out.label = restored ? ActionLabel::Antagonism : ActionLabel::LessThanAdditive;
    } else {
      out.label = ActionLabel::GreaterThanAdditive;
    }
  } else {
    // Single-factor effects disagree in direction: compare magnitudes.
    out.label = std::fabs(out.joint) < std::fabs(out.effect1 + out.effect2)
                    ? ActionLabel::LessThanAdditive
                    : ActionLabel::GreaterThanAdditive;
  }
  return out;
}

}  // namespace condreg
