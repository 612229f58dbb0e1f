#include "condreg/terms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "condreg/error.hpp"

namespace condreg {

Term::Term(std::vector<Factor> factors) {
  if (factors.empty()) throw Error(ErrorCode::Argument, "term needs at least one factor");
  std::map<std::string, int> merged;
  for (auto& f : factors) {
    if (f.predictor.empty()) throw Error(ErrorCode::Argument, "term factor has an empty name");
    if (f.power < 1) {
      throw Error(ErrorCode::Argument, "power of '" + f.predictor + "' must be >= 1");
    }
    merged[f.predictor] += f.power;
  }
  for (auto& [name, power] : merged) factors_.push_back(Factor{name, power});
}

Term Term::linear(std::string predictor) { return Term({Factor{std::move(predictor), 1}}); }

Term Term::power(std::string predictor, int power) {
  return Term({Factor{std::move(predictor), power}});
}

Term Term::product(const std::vector<std::string>& predictors) {
  std::vector<Factor> fs;
  for (const auto& p : predictors) fs.push_back(Factor{p, 1});
  return Term(std::move(fs));
}

int Term::degree() const noexcept {
  int d = 0;
  for (const auto& f : factors_) d += f.power;
  return d;
}

int Term::power_of(std::string_view predictor) const noexcept {
  for (const auto& f : factors_) {
    if (f.predictor == predictor) return f.power;
  }
  return 0;
}

std::string Term::label() const {
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += ':';
    out += f.predictor;
    if (f.power > 1) out += '^' + std::to_string(f.power);
  }
  return out;
}

double Term::evaluate(const Assignment& at) const {
  double v = 1.0;
  for (const auto& f : factors_) {
    auto it = at.find(f.predictor);
    if (it == at.end()) {
      throw Error(ErrorCode::UnknownColumn, "no value for predictor '" + f.predictor + "'");
    }
    for (int k = 0; k < f.power; ++k) v *= it->second;
  }
  return v;
}

// ---------------------------------------------------------------------------

void ModelSpec::validate() const {
  if (response.empty()) throw Error(ErrorCode::Argument, "model has no response");
  std::set<Term> seen;
  for (const auto& t : terms) {
    if (!seen.insert(t).second) {
      throw Error(ErrorCode::Argument, "duplicate term '" + t.label() + "'");
    }
    if (t.contains(response)) {
      throw Error(ErrorCode::Argument, "response '" + response + "' used as a predictor");
    }
  }
  if (parameter_count() == 0) throw Error(ErrorCode::Argument, "model has no parameters");
}

std::vector<std::string> ModelSpec::predictors() const {
  std::vector<std::string> out;
  for (const auto& t : terms) {
    for (const auto& f : t.factors()) {
      if (std::find(out.begin(), out.end(), f.predictor) == out.end()) out.push_back(f.predictor);
    }
  }
  return out;
}

bool ModelSpec::contains(const Term& term) const noexcept {
  return std::find(terms.begin(), terms.end(), term) != terms.end();
}

long ModelSpec::coefficient_index(const Term& term) const noexcept {
  auto it = std::find(terms.begin(), terms.end(), term);
  if (it == terms.end()) return -1;
  return static_cast<long>(it - terms.begin()) + (intercept ? 1 : 0);
}

std::vector<std::string> ModelSpec::coefficient_labels() const {
  std::vector<std::string> out;
  if (intercept) out.emplace_back("(Intercept)");
  for (const auto& t : terms) out.push_back(t.label());
  return out;
}

ModelSpec full_quadratic(const std::vector<std::string>& predictors, std::string response) {
  if (predictors.empty()) throw Error(ErrorCode::Argument, "full quadratic needs a predictor");
  std::vector<std::string> names = predictors;
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw Error(ErrorCode::Argument, "duplicate predictor in full quadratic");
  }
  ModelSpec spec{std::move(response), true, {}};
  for (const auto& x : names) spec.terms.push_back(Term::linear(x));
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      spec.terms.push_back(Term::product({names[i], names[j]}));
    }
  }
  for (const auto& x : names) spec.terms.push_back(Term::power(x, 2));
  return spec;
}

std::vector<std::string> check_hierarchy(const ModelSpec& spec) {
  std::set<std::string> in_higher;
  std::set<std::string> linear;
  for (const auto& t : spec.terms) {
    if (t.is_linear()) {
      linear.insert(t.factors().front().predictor);
    } else {
      for (const auto& f : t.factors()) in_higher.insert(f.predictor);
    }
  }
  std::vector<std::string> missing;
  for (const auto& p : in_higher) {
    if (!linear.count(p)) missing.push_back(p);
  }
  return missing;
}

std::vector<std::string> enforce_hierarchy(const ModelSpec& spec, HierarchyMode mode) {
  const auto missing = check_hierarchy(spec);
  std::vector<std::string> warnings;
  for (const auto& p : missing) {
    warnings.push_back("hierarchy: '" + p + "' appears in higher-order terms without a linear term");
  }
  if (mode == HierarchyMode::Strict && !warnings.empty()) {
    throw Error(ErrorCode::Scope, warnings.front());
  }
  return warnings;
}

DesignMatrix expand(const Dataset& d, const ModelSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(d.rows());
  const auto p = static_cast<Eigen::Index>(spec.parameter_count());
  for (const auto& name : spec.predictors()) d.column(name);
  if (p > n) {
    throw Error(ErrorCode::Underdetermined, "model has " + std::to_string(p) +
                                                " parameters but only " + std::to_string(n) +
                                                " observations");
  }
  DesignMatrix out;
  out.labels = spec.coefficient_labels();
  out.x.resize(n, p);
  Eigen::Index col = 0;
  if (spec.intercept) out.x.col(col++).setOnes();
  for (const auto& t : spec.terms) {
    auto c = out.x.col(col++);
    c.setOnes();
    for (const auto& f : t.factors()) {
      const auto values = d.vector(f.predictor);
      for (int k = 0; k < f.power; ++k) c.array() *= values.array();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void CodedScale::add(std::string predictor, double raw_min, double raw_max) {
  if (!std::isfinite(raw_min) || !std::isfinite(raw_max) || !(raw_min < raw_max)) {
    throw Error(ErrorCode::Argument, "coded scale for '" + predictor + "' needs min < max");
  }
  ranges_[std::move(predictor)] = Range{raw_min, raw_max};
}

bool CodedScale::has(std::string_view predictor) const noexcept {
  return ranges_.find(predictor) != ranges_.end();
}

const CodedScale::Range& CodedScale::range(std::string_view predictor) const {
  auto it = ranges_.find(predictor);
  if (it == ranges_.end()) {
    throw Error(ErrorCode::Argument, "no coded scale for '" + std::string(predictor) + "'");
  }
  return it->second;
}

double CodedScale::code(std::string_view predictor, double raw) const {
  const auto& r = range(predictor);
  return 2.0 * (raw - r.min) / (r.max - r.min) - 1.0;
}

double CodedScale::decode(std::string_view predictor, double coded) const {
  const auto& r = range(predictor);
  return r.min + 0.5 * (coded + 1.0) * (r.max - r.min);
}

}  // namespace condreg
