#include "condreg/distributions.hpp"

#include <cmath>
#include <limits>

#include "condreg/error.hpp"

namespace condreg::dist {
namespace {

constexpr double kRelTol = 1e-12;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kRelTol) return h;
  }
  throw Error(ErrorCode::Argument, "incomplete beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::Argument, "incomplete beta: arguments out of domain");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast for x < (a+1)/(a+b+2); use symmetry otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
  if (!(dof > 0.0)) throw Error(ErrorCode::Argument, "student t: dof must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

double student_t_cdf(double t, double dof) {
  const double tail = 0.5 * student_t_two_sided(t, dof);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double chi_square2_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return -std::expm1(-0.5 * x);
}

double chi_square2_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::Argument, "chi-square quantile: level must lie in (0, 1)");
  }
  return -2.0 * std::log1p(-level);
}

}  // namespace condreg::dist
