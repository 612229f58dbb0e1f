#pragma once

// Distribution functions needed for regression inference. Student t is
// evaluated through the regularized incomplete beta function.

namespace condreg::dist {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
/// Continued-fraction evaluation to a relative tolerance of 1e-12.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student t with `dof` degrees of freedom (dof > 0).
double student_t_cdf(double t, double dof);

/// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided(double t, double dof);

/// Chi-square distribution with two degrees of freedom.
double chi_square2_cdf(double x);
double chi_square2_quantile(double level);

}  // namespace condreg::dist
