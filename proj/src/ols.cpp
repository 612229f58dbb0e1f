#include "condreg/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "condreg/distributions.hpp"
#include "condreg/error.hpp"

namespace condreg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// p-values are reported in (0, 1]; underflow is floored at the smallest
// normal double.
double floor_p(double p) { return std::max(p, std::numeric_limits<double>::min()); }

}  // namespace

double FittedModel::coefficient(const Term& term) const {
  const long idx = spec.coefficient_index(term);
  if (idx < 0) throw Error(ErrorCode::Argument, "model has no term '" + term.label() + "'");
  return coef(idx);
}

double FittedModel::coefficient_or_zero(const Term& term) const noexcept {
  const long idx = spec.coefficient_index(term);
  return idx < 0 ? 0.0 : coef(idx);
}

std::optional<double> FittedModel::p_value(const Term& term) const {
  const long idx = spec.coefficient_index(term);
  if (idx < 0) throw Error(ErrorCode::Argument, "model has no term '" + term.label() + "'");
  if (p.size() == 0 || std::isnan(p(idx))) return std::nullopt;
  return p(idx);
}

FittedModel fit(const Dataset& d, const ModelSpec& spec, const FitOptions& options) {
  const DesignMatrix design = expand(d, spec);
  const Eigen::MatrixXd& x = design.x;
  const Eigen::VectorXd y = d.vector(spec.response);
  const auto n = x.rows();
  const auto p = x.cols();
  const long dof = static_cast<long>(n) - static_cast<long>(p);
  if (dof < 1 && !(dof == 0 && options.allow_exact_fit)) {
    throw Error(ErrorCode::Saturated, "model leaves " + std::to_string(dof) +
                                          " residual degrees of freedom");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(n, p);
  qr.setThreshold(options.rank_tolerance);
  qr.compute(x);
  if (qr.rank() < p) {
    const auto dependent = qr.colsPermutation().indices()(qr.rank());
    throw Error(ErrorCode::Collinearity, "design column '" + design.labels[dependent] +
                                             "' is linearly dependent on the others");
  }

  FittedModel m;
  m.spec = spec;
  m.labels = design.labels;
  m.n = static_cast<std::size_t>(n);
  m.dof = dof;
  m.from_data = true;
  m.coef = qr.solve(y);
  m.residuals = y - x * m.coef;
  m.rss = m.residuals.squaredNorm();
  m.tss = spec.intercept ? (y.array() - y.mean()).square().sum() : y.squaredNorm();
  m.r2 = m.tss > 0.0 ? 1.0 - m.rss / m.tss : 0.0;
  if (spec.intercept) m.r2 = std::clamp(m.r2, 0.0, 1.0);

  m.se = Eigen::VectorXd::Constant(p, kNaN);
  m.t = Eigen::VectorXd::Constant(p, kNaN);
  m.p = Eigen::VectorXd::Constant(p, kNaN);
  m.cov = Eigen::MatrixXd::Constant(p, p, kNaN);
  m.r2_adj = kNaN;
  m.sigma2 = kNaN;
  if (dof == 0) return m;

  m.has_inference = true;
  m.r2_adj = 1.0 - (1.0 - m.r2) * static_cast<double>(n - 1) / static_cast<double>(dof);
  m.sigma2 = m.rss / static_cast<double>(dof);
  // (X'X)^-1 = P R^-1 R^-T P' from X P = Q R.
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd unscaled_perm = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  m.cov = perm * unscaled_perm * perm.transpose();
  m.cov *= m.sigma2;
  m.cov = 0.5 * (m.cov + m.cov.transpose()).eval();

  const auto dof_d = static_cast<double>(dof);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double se = std::sqrt(std::max(m.cov(i, i), 0.0));
    m.se(i) = se;
    if (se > 0.0) {
      m.t(i) = m.coef(i) / se;
      m.p(i) = floor_p(dist::student_t_two_sided(m.t(i), dof_d));
    } else if (m.coef(i) == 0.0) {
      m.t(i) = 0.0;
      m.p(i) = 1.0;
    } else {
      m.t(i) = std::copysign(std::numeric_limits<double>::infinity(), m.coef(i));
      m.p(i) = std::numeric_limits<double>::min();
    }
  }
  return m;
}

FittedModel from_coefficients(ModelSpec spec, std::vector<double> coefficients,
                              std::optional<std::vector<double>> p_values) {
  spec.validate();
  const auto p = static_cast<Eigen::Index>(spec.parameter_count());
  if (static_cast<Eigen::Index>(coefficients.size()) != p) {
    throw Error(ErrorCode::Argument, "expected " + std::to_string(p) + " coefficients, got " +
                                         std::to_string(coefficients.size()));
  }
  FittedModel m;
  m.labels = spec.coefficient_labels();
  m.spec = std::move(spec);
  m.coef = Eigen::Map<const Eigen::VectorXd>(coefficients.data(), p);
  m.se = Eigen::VectorXd::Constant(p, kNaN);
  m.t = Eigen::VectorXd::Constant(p, kNaN);
  m.p = Eigen::VectorXd::Constant(p, kNaN);
  m.cov = Eigen::MatrixXd::Constant(p, p, kNaN);
  m.r2 = m.r2_adj = m.rss = m.tss = m.sigma2 = kNaN;
  if (p_values) {
    if (static_cast<Eigen::Index>(p_values->size()) != p) {
      throw Error(ErrorCode::Argument, "expected " + std::to_string(p) + " p-values, got " +
                                           std::to_string(p_values->size()));
    }
    for (Eigen::Index i = 0; i < p; ++i) {
      const double v = (*p_values)[i];
      if (!(v > 0.0 && v <= 1.0)) throw Error(ErrorCode::Argument, "p-values must lie in (0, 1]");
      m.p(i) = v;
    }
  }
  return m;
}

double predict(const FittedModel& m, const Assignment& point) {
  for (const auto& name : m.spec.predictors()) {
    if (point.find(name) == point.end()) {
      throw Error(ErrorCode::Argument, "prediction point lacks predictor '" + name + "'");
    }
  }
  double y = m.intercept();
  const Eigen::Index offset = m.spec.intercept ? 1 : 0;
  for (std::size_t j = 0; j < m.spec.terms.size(); ++j) {
    y += m.coef(offset + static_cast<Eigen::Index>(j)) * m.spec.terms[j].evaluate(point);
  }
  return y;
}

NestedComparison compare(const FittedModel& smaller, const FittedModel& larger) {
  if (smaller.spec.response != larger.spec.response) {
    throw Error(ErrorCode::Nesting, "models have different responses");
  }
  if (smaller.n != larger.n || !smaller.from_data || !larger.from_data) {
    throw Error(ErrorCode::Nesting, "models were not fitted to the same data");
  }
  if (smaller.spec.intercept && !larger.spec.intercept) {
    throw Error(ErrorCode::Nesting, "smaller model has an intercept the larger one lacks");
  }
  for (const auto& t : smaller.spec.terms) {
    if (!larger.spec.contains(t)) {
      throw Error(ErrorCode::Nesting, "term '" + t.label() + "' is missing from the larger model");
    }
  }
  return NestedComparison{larger.r2 - smaller.r2, smaller.rss - larger.rss,
                          smaller.dof - larger.dof};
}

SimpleFit simple_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::Argument, "simple regression needs two equal-length samples (n >= 2)");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateColumn, "simple regression on a constant predictor");
  const double slope = sxy / sxx;
  return SimpleFit{my - slope * mx, slope};
}

}  // namespace condreg
