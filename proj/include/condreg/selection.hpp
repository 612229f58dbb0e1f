#pragma once

#include <optional>
#include <string>
#include <vector>

#include "condreg/dataset.hpp"
#include "condreg/ols.hpp"

namespace condreg {

struct Advisory {
  std::string kind;  // "k_rule", "correlation", "hierarchy"
  std::string message;
};

/// Rule-of-thumb warnings for a model on a dataset: term count k >= n/10,
/// any predictor pair with |r| above `correlation_threshold`, and hierarchy
/// violations.
std::vector<Advisory> advisories(const Dataset& d, const ModelSpec& spec,
                                 double correlation_threshold = 0.7);

struct SubsetOptions {
  bool intercept = true;
  /// Refuse searches larger than this many candidate fits.
  std::size_t max_candidates = 1'000'000;
  /// Worker threads; 0 picks hardware concurrency.
  unsigned threads = 0;
  /// Keep only the best `keep` models (0 keeps every fitted candidate).
  std::size_t keep = 0;
};

struct SearchResult {
  /// Sorted by r2 descending, then fewer terms, then term order.
  std::vector<FittedModel> ranked;
  std::vector<std::string> skipped;  // rank-deficient / saturated candidates
  std::vector<Advisory> warnings;
  std::size_t candidates = 0;
};

/// Fits every size-`subset_size` combination of `pool`. The pool is put into
/// canonical term order first, so results do not depend on its ordering.
/// Errors: Argument (empty pool, bad size, too many candidates),
/// NoModel (every candidate rank-deficient).
SearchResult best_subset(const Dataset& d, const std::string& response,
                         const std::vector<Term>& pool, std::size_t subset_size,
                         const SubsetOptions& options = {});

struct StepwiseOptions {
  double alpha = 0.05;
  std::vector<Term> protected_terms;
  /// Keep linear terms of predictors that still appear in a surviving
  /// higher-order term.
  bool enforce_hierarchy = true;
};

struct StepwiseStep {
  FittedModel fit;
  std::optional<Term> removed;  // term dropped to reach this step
  double removed_p = 0.0;       // its p-value in the previous step
};

struct StepwiseResult {
  std::vector<StepwiseStep> trace;  // trace.front() is the start model
  std::vector<Advisory> warnings;

  const FittedModel& final_model() const { return trace.back().fit; }
};

/// Backward elimination: repeatedly drops the removable term with the largest
/// p-value above alpha and refits, until every removable term has p <= alpha.
StepwiseResult backward_stepwise(const Dataset& d, const ModelSpec& start,
                                 const StepwiseOptions& options = {});

}  // namespace condreg
