#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "condreg/dataset.hpp"

namespace condreg {

/// Values for a set of predictors, keyed by name.
using Assignment = std::map<std::string, double, std::less<>>;

struct Factor {
  std::string predictor;
  int power = 1;

  auto operator<=>(const Factor&) const = default;
};

/// A product of predictor powers, e.g. x1, x1:x2, x1^2, x1^2:x2.
/// Factors are kept merged (one entry per predictor) and sorted by name,
/// so x1:x2 and x2:x1 are the same term and x1:x1 becomes x1^2.
class Term {
 public:
  explicit Term(std::vector<Factor> factors);

  static Term linear(std::string predictor);
  static Term power(std::string predictor, int power);
  static Term product(const std::vector<std::string>& predictors);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  int degree() const noexcept;
  /// Power of `predictor` in this term, 0 when absent.
  int power_of(std::string_view predictor) const noexcept;
  bool contains(std::string_view predictor) const noexcept { return power_of(predictor) > 0; }
  bool is_linear() const noexcept { return factors_.size() == 1 && factors_.front().power == 1; }

  /// "x1", "x1:x2", "x1^2:x2".
  std::string label() const;

  /// Product of value^power over factors; throws Error(UnknownColumn) when a
  /// predictor is missing from the assignment.
  double evaluate(const Assignment& at) const;

  auto operator<=>(const Term&) const = default;

 private:
  std::vector<Factor> factors_;
};

/// Response, intercept flag, and an ordered term list. Coefficients attach
/// positionally after fitting: the intercept (when present) first.
struct ModelSpec {
  std::string response;
  bool intercept = true;
  std::vector<Term> terms;

  /// Throws Error(Argument) on duplicate terms or an empty response name.
  void validate() const;
  std::size_t parameter_count() const noexcept { return terms.size() + (intercept ? 1 : 0); }
  /// Distinct predictors in first-appearance order.
  std::vector<std::string> predictors() const;
  bool contains(const Term& term) const noexcept;
  /// Coefficient index of `term` (intercept offset included), or -1.
  long coefficient_index(const Term& term) const noexcept;
  /// Labels for every coefficient: "(Intercept)" then term labels.
  std::vector<std::string> coefficient_labels() const;
};

ModelSpec full_quadratic(const std::vector<std::string>& predictors, std::string response = "Y");

/// Predictors that appear in some term of degree >= 2 but have no pure
/// linear term. Sorted by name; empty means the model is hierarchical.
std::vector<std::string> check_hierarchy(const ModelSpec& spec);

enum class HierarchyMode { Warn, Strict };

/// Returns one warning per violation, or throws Error(Scope) under Strict.
std::vector<std::string> enforce_hierarchy(const ModelSpec& spec, HierarchyMode mode);

struct DesignMatrix {
  Eigen::MatrixXd x;
  std::vector<std::string> labels;
};

/// Builds the n x p design matrix: a column of ones first when the model has
/// an intercept, then one column per term in spec order.
DesignMatrix expand(const Dataset& d, const ModelSpec& spec);

/// Affine coding of raw doses onto [-1, +1]: min -> -1, max -> +1.
class CodedScale {
 public:
  void add(std::string predictor, double raw_min, double raw_max);
  bool has(std::string_view predictor) const noexcept;
  double code(std::string_view predictor, double raw) const;
  double decode(std::string_view predictor, double coded) const;

 private:
  struct Range {
    double min;
    double max;
  };
  const Range& range(std::string_view predictor) const;

  std::map<std::string, Range, std::less<>> ranges_;
};

}  // namespace condreg
