// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "condreg/conditional.hpp"
#include "condreg/dataset.hpp"
#include "condreg/formula.hpp"
#include "condreg/geometry.hpp"
#include "condreg/ols.hpp"
#include "condreg/relations.hpp"
#include "support.hpp"

using namespace condreg;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Verdict coefficient_bridge() {
  Verdict v;
  const auto b1 = reconstruct_two_predictor({579, 52.5, 0.316, 1.683, 0.729});
  const auto b2 = reconstruct_two_predictor({52.5, 579, 1.683, 0.316, 0.729});
  v.require(std::fabs(b1.b_target - 1047) <= 1.0, fmt("b1 = %.3f", b1.b_target));
  v.require(std::fabs(b2.b_target - -278) <= 1.0, fmt("b2 = %.3f", b2.b_target));
  v.detail = v.pass ? fmt("b1 = %.2f, b2 = %.2f", b1.b_target, b2.b_target) : v.detail;
  return v;
}

Verdict designed_experiment() {
  Verdict v;
  const Dataset d({{"SDH", {737.1, 639.9, 658.3, 736.7}}, {"Pb", {-1, 1, -1, 1}}, {"Cd", {-1, -1, 1, 1}}});
  FitOptions exact;
  exact.allow_exact_fit = true;
  const auto m = fit(d, parse_formula("SDH ~ Pb + Cd + Pb:Cd"), exact);
  const double want[] = {693.0, -4.70, 4.49, 43.92};
  for (int i = 0; i < 4; ++i) v.require(std::fabs(m.coef(i) - want[i]) <= 0.05, fmt("coef %g = %.4f", i, m.coef(i)));
  for (std::size_t i = 0; i < 4; ++i) {
    const double y = predict(m, {{"Pb", d.column("Pb")[i]}, {"Cd", d.column("Cd")[i]}});
    v.require(std::fabs(y - d.column("SDH")[i]) <= 0.05, fmt("corner %g predicts %.4f", static_cast<double>(i), y));
  }
  if (v.pass) v.detail = fmt("b0 = %.3f, cross = %.3f", m.coef(0), m.coef(3));
  return v;
}

Verdict conditional_values() {
  Verdict v;
  const auto m = from_coefficients(parse_formula("Y ~ CO + SO2 + CO:SO2"), {204, 1674, 36, -413});
  const auto lo = derive(m, "CO", {{"SO2", 0.598}});
  const auto hi = derive(m, "CO", {{"SO2", 2.63}});
  v.require(std::fabs(lo.poly[1] - 1427.0) <= 0.5, fmt("slope at 0.598 = %.3f", lo.poly[1]));
  v.require(std::fabs(hi.poly[1] - 587.8) <= 0.5, fmt("slope at 2.63 = %.3f", hi.poly[1]));
  v.require(std::fabs(lo.poly[0] - 225.5) <= 0.5, fmt("intercept at 0.598 = %.3f", lo.poly[0]));
  v.require(std::fabs(hi.poly[0] - 298.7) <= 0.5, fmt("intercept at 2.63 = %.3f", hi.poly[0]));
  if (v.pass) v.detail = fmt("slopes %.2f / %.2f, intercepts %.2f", lo.poly[1], hi.poly[1], lo.poly[0]);
  return v;
}

Verdict t_coefficients_check() {
  Verdict v;
  const auto m = from_coefficients(parse_formula("Y ~ x1 + x2 + x3 + x4 + x1:x2 + x1:x3"),
                                   {1175, -15.08, -3.411, -39.62, -4.810, 0.0504, 0.565});
  const double x1s[] = {57.8, 63.8, 69.3};
  const double t2s[] = {-0.498, -0.195, 0.0817};
  for (int i = 0; i < 3; ++i) {
    const auto t = t_coefficients(m, "x2", {{"x1", x1s[i]}, {"x3", 18.5}, {"x4", 4.42}});
    v.require(std::fabs(t.linear - t2s[i]) <= 0.001, fmt("T2(%.1f) = %.5f", x1s[i], t.linear));
  }
  const auto t1 = t_coefficients(m, "x1", {{"x2", 54.0}, {"x3", 18.5}, {"x4", 4.42}});
  v.require(std::fabs(t1.linear - -1.921) <= 0.06, fmt("T1 = %.4f", t1.linear));
  if (v.pass) v.detail = fmt("T1 at lower quartiles = %.4f", t1.linear);
  return v;
}

Verdict correlation_p_values() {
  Verdict v;
  const double p1 = pearson_p_value(0.578, 19), p2 = pearson_p_value(0.121, 19);
  v.require(std::fabs(p1 - 0.010) <= 0.001, fmt("p(0.578) = %.5f", p1));
  v.require(std::fabs(p2 - 0.622) <= 0.002, fmt("p(0.121) = %.5f", p2));
  if (v.pass) v.detail = fmt("p = %.5f, %.5f", p1, p2);
  return v;
}

Verdict abbott_carroll_identity() {
  Verdict v;
  std::mt19937_64 rng(support::kSeed + 600);
  std::uniform_int_distribution<std::size_t> nd(10, 50), kd(2, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = kd(rng), n = nd(rng);
    const auto d = support::random_linear(rng, n, k);
    const auto names = support::predictor_names(k);
    ModelSpec spec{"Y", true, {}};
    for (const auto& p : names) spec.terms.push_back(Term::linear(p));
    const auto m = fit(d, spec);
    const auto target = names[static_cast<std::size_t>(trial) % k];
    const auto xt = support::values(d, target);
    // Independent side: textbook SLR slopes.
    const double a = support::slr_slope(xt, support::values(d, "Y"));
    double sum = m.coefficient(Term::linear(target));
    for (const auto& p : names) {
      if (p != target) sum += m.coefficient(Term::linear(p)) * support::slr_slope(xt, support::values(d, p));
    }
    const auto lib = abbott_carroll(d, "Y", names, target);
    const double err = std::fabs(sum - a) / std::max(1.0, std::fabs(a));
    const double err_lib = std::fabs(lib.ac_sum - a) / std::max(1.0, std::fabs(a));
    worst = std::max({worst, err, err_lib});
    v.require(err <= 1e-9 && err_lib <= 1e-9, fmt("trial %g relative error %.3g", trial, std::max(err, err_lib)));
  }
  if (v.pass) v.detail = fmt("100 datasets, worst relative error %.2e", worst);
  return v;
}

Verdict frisch_waugh() {
  Verdict v;
  std::mt19937_64 rng(support::kSeed + 700);
  std::uniform_int_distribution<std::size_t> nd(10, 50), kd(2, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = kd(rng), n = nd(rng);
    const auto d = support::random_linear(rng, n, k);
    const auto names = support::predictor_names(k);
    const auto target = names[static_cast<std::size_t>(trial) % k];
    std::vector<std::string> others;
    ModelSpec spec{"Y", true, {}};
    for (const auto& p : names) {
      spec.terms.push_back(Term::linear(p));
      if (p != target) others.push_back(p);
    }
    const double b = fit(d, spec).coefficient(Term::linear(target));
    const auto res = residualize(d, target, others);
    const double slope = support::slr_slope(res.values, support::values(d, "Y"));
    const double err = std::fabs(slope - b) / std::max(1.0, std::fabs(b));
    worst = std::max(worst, err);
    v.require(err <= 1e-9, fmt("trial %g relative error %.3g", trial, err));
  }
  if (v.pass) v.detail = fmt("100 datasets, worst relative error %.2e", worst);
  return v;
}

Verdict ols_oracle() {
  Verdict v;
  std::mt19937_64 rng(support::kSeed + 800);
  std::uniform_int_distribution<std::size_t> nd(4, 8), pd(1, 3);
  double worst_coef = 0.0, worst_orth = 0.0;
  int fits = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t p = pd(rng);  // parameters including the intercept
    const std::size_t n = std::max(nd(rng), p + 1);
    const auto d = support::random_linear(rng, n, std::max<std::size_t>(p - 1, 1));
    ModelSpec spec{"Y", true, {}};
    for (std::size_t j = 1; j < p; ++j) spec.terms.push_back(Term::linear("x" + std::to_string(j)));
    const auto m = fit(d, spec);
    const auto dm = expand(d, spec);
    std::vector<std::vector<double>> rows(n, std::vector<double>(p));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) rows[i][j] = dm.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    const auto oracle = support::normal_equations(rows, support::values(d, "Y"));
    for (std::size_t j = 0; j < p; ++j) {
      const double c = m.coef(static_cast<Eigen::Index>(j));
      const double err = std::fabs(c - oracle[j]) / std::max(1.0, std::fabs(oracle[j]));
      worst_coef = std::max(worst_coef, err);
      v.require(err <= 1e-9, fmt("trial %g coefficient error %.3g", trial, err));
    }
    const Eigen::VectorXd g = dm.x.transpose() * m.residuals;
    const double scale = dm.x.norm() * std::max(1.0, m.residuals.norm());
    const double orth = g.cwiseAbs().maxCoeff() / scale;
    worst_orth = std::max(worst_orth, orth);
    v.require(orth <= 1e-8, fmt("trial %g orthogonality %.3g", trial, orth));
    ++fits;
  }
  if (v.pass) {
    v.detail = fmt("%g fits, worst coefficient error %.2e, worst orthogonality %.2e", fits, worst_coef, worst_orth);
  }
  return v;
}

Verdict nested_and_orthogonal() {
  Verdict v;
  std::mt19937_64 rng(support::kSeed + 900);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = support::random_linear(rng, 10, 3);
    const auto small = fit(d, parse_formula("Y ~ x1 + x2"));
    for (const char* extra : {"x3", "x1:x2", "x1^2", "x2:x3"}) {
      const auto big = fit(d, parse_formula(std::string("Y ~ x1 + x2 + ") + extra));
      v.require(big.r2 >= small.r2 - 1e-15, fmt("trial %g: R2 fell from %.6f to %.6f", trial, small.r2, big.r2));
    }
  }
  // Balanced two-level factorial: the product column is sample-orthogonal to
  // the intercept and both main effects.
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::normal_distribution<double> z(700, 40);
    const std::size_t reps = 1 + static_cast<std::size_t>(trial % 5);
    std::vector<double> y, a, b;
    for (std::size_t r = 0; r < reps; ++r) {
      for (double pa : {-1.0, 1.0}) {
        for (double pb : {-1.0, 1.0}) {
          a.push_back(pa);
          b.push_back(pb);
          y.push_back(z(rng));
        }
      }
    }
    const Dataset d({{"Y", y}, {"Pb", a}, {"Cd", b}});
    FitOptions exact;
    exact.allow_exact_fit = true;
    const auto lin = fit(d, parse_formula("Y ~ Pb + Cd"), exact);
    const auto cross = fit(d, parse_formula("Y ~ Pb + Cd + Pb:Cd"), exact);
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double err = std::fabs(lin.coef(j) - cross.coef(j)) / std::max(1.0, std::fabs(lin.coef(j)));
      worst = std::max(worst, err);
      v.require(err <= 1e-9, fmt("trial %g coefficient %g moved by %.3g", trial, static_cast<double>(j), err));
    }
    v.require(cross.r2 >= lin.r2, "cross term lowered R2");
  }
  if (v.pass) v.detail = fmt("R2 monotone over 400 extensions; orthogonal-column drift %.2e", worst);
  return v;
}

Verdict ellipse_coverage() {
  Verdict v;
  std::mt19937_64 rng(support::kSeed + 1000);
  std::normal_distribution<double> z;
  const std::size_t n = 10000;
  const double rho = 0.729;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = z(rng), b = z(rng);
    x[i] = 1.0 + 0.5 * a;
    y[i] = 2.0 + 1.5 * (rho * a + std::sqrt(1 - rho * rho) * b);
  }
  const Dataset d({{"CO", x}, {"SO2", y}});
  const auto e = ellipse(d, "CO", "SO2", 0.95);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < n; ++i) inside += e.contains({x[i], y[i]}) ? 1 : 0;
  const double frac = static_cast<double>(inside) / static_cast<double>(n);
  const double oracle = boost::math::quantile(boost::math::chi_squared(2), 0.95);
  v.require(std::fabs(frac - 0.95) <= 0.02, fmt("coverage %.4f", frac));
  v.require(std::fabs(e.threshold - oracle) <= 1e-6, fmt("threshold %.9f vs %.9f", e.threshold, oracle));
  if (v.pass) v.detail = fmt("coverage %.4f, threshold %.6f", frac, e.threshold);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"1 coefficient bridge reconstruction", coefficient_bridge},
      {"2 designed-experiment fit", designed_experiment},
      {"3 conditional-function values", conditional_values},
      {"4 T-coefficients", t_coefficients_check},
      {"5 correlation p-values", correlation_p_values},
      {"6 Abbott-Carroll identity", abbott_carroll_identity},
      {"7 Frisch-Waugh property", frisch_waugh},
      {"8 OLS oracle and orthogonality", ols_oracle},
      {"9 nested R2 and orthogonal-column stability", nested_and_orthogonal},
      {"10 ellipse coverage and threshold", ellipse_coverage},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %-46s %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
