#include "condreg/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "condreg/error.hpp"

namespace condreg {
namespace {

bool skippable(const Error& e) {
  return e.code() == ErrorCode::Collinearity || e.code() == ErrorCode::Saturated ||
         e.code() == ErrorCode::Underdetermined;
}

// Number of k-subsets of n items, saturating at `cap + 1`.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(c));
}

bool ranks_before(const FittedModel& a, const FittedModel& b) {
  if (a.r2 != b.r2) return a.r2 > b.r2;
  if (a.spec.terms.size() != b.spec.terms.size()) return a.spec.terms.size() < b.spec.terms.size();
  return std::lexicographical_compare(a.spec.terms.begin(), a.spec.terms.end(),
                                      b.spec.terms.begin(), b.spec.terms.end());
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::vector<Advisory> advisories(const Dataset& d, const ModelSpec& spec,
                                 double correlation_threshold) {
  std::vector<Advisory> out;
  const std::size_t k = spec.terms.size();
  const std::size_t n = d.rows();
  if (10 * k >= n) {
    out.push_back({"k_rule", "model has k = " + std::to_string(k) + " terms for n = " +
                                 std::to_string(n) + " observations; rule of thumb is k < n/10"});
  }
  const auto predictors = spec.predictors();
  if (n >= 3) {
    for (std::size_t i = 0; i < predictors.size(); ++i) {
      if (!d.has_column(predictors[i])) continue;
      for (std::size_t j = i + 1; j < predictors.size(); ++j) {
        if (!d.has_column(predictors[j])) continue;
        double r = 0.0;
        try {
          r = pearson_r(d.column(predictors[i]), d.column(predictors[j]));
        } catch (const Error&) {
          continue;  // constant column: no correlation to report
        }
        if (std::fabs(r) > correlation_threshold) {
          out.push_back({"correlation", "r(" + predictors[i] + ", " + predictors[j] + ") = " +
                                            fmt(r) + " exceeds " + fmt(correlation_threshold) +
                                            "; coefficients may be unstable"});
        }
      }
    }
  }
  for (auto& w : enforce_hierarchy(spec, HierarchyMode::Warn)) {
    out.push_back({"hierarchy", std::move(w)});
  }
  return out;
}

SearchResult best_subset(const Dataset& d, const std::string& response,
                         const std::vector<Term>& pool, std::size_t subset_size,
                         const SubsetOptions& options) {
  if (pool.empty()) throw Error(ErrorCode::Argument, "candidate pool is empty");
  if (subset_size == 0 || subset_size > pool.size()) {
    throw Error(ErrorCode::Argument, "subset size must lie in [1, " + std::to_string(pool.size()) + "]");
  }
  std::vector<Term> terms = pool;
  std::sort(terms.begin(), terms.end());
  if (std::adjacent_find(terms.begin(), terms.end()) != terms.end()) {
    throw Error(ErrorCode::Argument, "candidate pool contains a duplicate term");
  }
  const std::size_t total = binomial_capped(terms.size(), subset_size, options.max_candidates);
  if (total > options.max_candidates) {
    throw Error(ErrorCode::Argument, "exhaustive search exceeds " +
                                         std::to_string(options.max_candidates) + " candidate fits");
  }

  // Enumerate index combinations in lexicographic order.
  std::vector<std::vector<std::size_t>> combos;
  combos.reserve(total);
  std::vector<std::size_t> idx(subset_size);
  for (std::size_t i = 0; i < subset_size; ++i) idx[i] = i;
  while (true) {
    combos.push_back(idx);
    std::size_t pos = subset_size;
    while (pos > 0 && idx[pos - 1] == terms.size() - subset_size + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < subset_size; ++j) idx[j] = idx[j - 1] + 1;
  }

  std::vector<std::optional<FittedModel>> fits(combos.size());
  std::vector<std::string> notes(combos.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < combos.size(); c = next++) {
      ModelSpec spec{response, options.intercept, {}};
      for (auto i : combos[c]) spec.terms.push_back(terms[i]);
      try {
        fits[c] = fit(d, spec);
      } catch (const Error& e) {
        if (skippable(e)) {
          std::string labels;
          for (const auto& t : spec.terms) labels += (labels.empty() ? "" : " + ") + t.label();
          notes[c] = labels + ": " + e.what();
        } else {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(combos.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool_threads;
    for (unsigned t = 0; t < threads; ++t) pool_threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SearchResult out;
  out.candidates = combos.size();
  for (std::size_t c = 0; c < combos.size(); ++c) {
    if (fits[c]) {
      out.ranked.push_back(std::move(*fits[c]));
    } else {
      out.skipped.push_back(std::move(notes[c]));
    }
  }
  if (out.ranked.empty()) throw Error(ErrorCode::NoModel, "every candidate model is rank-deficient");
  std::stable_sort(out.ranked.begin(), out.ranked.end(), ranks_before);
  if (options.keep > 0 && out.ranked.size() > options.keep) out.ranked.resize(options.keep);
  out.warnings = advisories(d, out.ranked.front().spec);
  return out;
}

StepwiseResult backward_stepwise(const Dataset& d, const ModelSpec& start,
                                 const StepwiseOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::Argument, "alpha must lie in (0, 1)");
  }
  StepwiseResult out;
  out.trace.push_back(StepwiseStep{fit(d, start), std::nullopt, 0.0});
  const std::set<Term> protected_terms(options.protected_terms.begin(),
                                       options.protected_terms.end());

  while (true) {
    const FittedModel& current = out.trace.back().fit;
    const auto& terms = current.spec.terms;
    const Eigen::Index offset = current.spec.intercept ? 1 : 0;
    std::optional<std::size_t> worst;
    double worst_p = -1.0;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      const Term& t = terms[j];
      if (protected_terms.count(t)) continue;
      if (options.enforce_hierarchy && t.is_linear()) {
        const auto& name = t.factors().front().predictor;
        const bool in_higher = std::any_of(terms.begin(), terms.end(), [&](const Term& other) {
          return other.degree() >= 2 && other.contains(name);
        });
        if (in_higher) continue;
      }
      const double p = current.p(offset + static_cast<Eigen::Index>(j));
      if (p > worst_p || (p == worst_p && worst && t < terms[*worst])) {
        worst_p = p;
        worst = j;
      }
    }
    if (!worst || !(worst_p > options.alpha)) break;
    if (current.spec.parameter_count() <= 1) break;

    ModelSpec next = current.spec;
    Term removed = next.terms[*worst];
    next.terms.erase(next.terms.begin() + static_cast<std::ptrdiff_t>(*worst));
    out.trace.push_back(StepwiseStep{fit(d, next), std::move(removed), worst_p});
  }
  out.warnings = advisories(d, out.final_model().spec);
  return out;
}

}  // namespace condreg
