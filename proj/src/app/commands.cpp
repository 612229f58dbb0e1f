#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "condreg/conditional.hpp"
#include "condreg/dataset.hpp"
#include "condreg/error.hpp"
#include "condreg/formula.hpp"
#include "condreg/geometry.hpp"
#include "condreg/ols.hpp"
#include "condreg/relations.hpp"
#include "condreg/selection.hpp"
#include "config.hpp"
#include "report.hpp"

namespace condreg::app {
namespace {

// ---------------------------------------------------------------------------
// Argument helpers

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    out.push_back(item);
  }
  return out;
}

double to_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  if (!parse_number(text, v)) throw Error(ErrorCode::Argument, what + ": '" + text + "' is not a number");
  return v;
}

std::vector<double> number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_number(item, what));
  return out;
}

std::vector<std::string> name_list(const std::string& text, const std::string& what) {
  auto out = split(text, ',');
  if (out.empty() || std::any_of(out.begin(), out.end(), [](const auto& s) { return s.empty(); })) {
    throw Error(ErrorCode::Argument, what + ": expected a comma-separated list of names");
  }
  return out;
}

std::pair<std::string, std::string> key_value(const std::string& text, const std::string& what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error(ErrorCode::Argument, what + ": expected name=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::map<std::string, FixValue, std::less<>> parse_fixes(const std::vector<std::string>& items) {
  std::map<std::string, FixValue, std::less<>> out;
  for (const auto& item : items) {
    auto [name, value] = key_value(item, "--fix");
    if (out.count(name)) throw Error(ErrorCode::Argument, "--fix: '" + name + "' given twice");
    double v = 0.0;
    if (parse_number(value, v)) {
      out[name] = v;
    } else {
      out[name] = parse_preset(value);
    }
  }
  return out;
}

struct SweepSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;
};

SweepSpec parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw Error(ErrorCode::Argument, "--sweep: expected min:max:steps");
  SweepSpec s{to_number(parts[0], "--sweep"), to_number(parts[1], "--sweep"), 0};
  const double steps = to_number(parts[2], "--sweep");
  if (!(steps >= 1.0) || steps != std::floor(steps)) {
    throw Error(ErrorCode::Argument, "--sweep: steps must be a positive integer");
  }
  s.steps = static_cast<std::size_t>(steps);
  return s;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw Error(ErrorCode::Argument, what + ": expected low:high");
  return {to_number(parts[0], what), to_number(parts[1], what)};
}

Json assignment_json(const Assignment& a) {
  Json j = Json::object();
  for (const auto& [k, v] : a) j[k] = number(v);
  return j;
}

// ---------------------------------------------------------------------------
// Execution context

struct Context {
  std::ostream& out;
  Config config;
  std::string stage = "setup";
};

struct DataOptions {
  std::string path;
  std::string delimiter;
  bool no_header = false;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool required) {
  auto* opt = cmd->add_option("--data,-d", o.path, "CSV input ('-' for stdin)");
  if (required) opt->required();
  cmd->add_option("--delimiter", o.delimiter, "CSV delimiter (default ',')");
  cmd->add_flag("--no-header", o.no_header, "first row holds data, columns become V1..Vk");
}

LoadResult load_data(Context& ctx, const DataOptions& o) {
  ctx.stage = "load";
  CsvOptions csv;
  csv.header = !o.no_header;
  csv.delimiter = ctx.config.delimiter;
  if (!o.delimiter.empty()) {
    if (o.delimiter.size() != 1) throw Error(ErrorCode::Argument, "--delimiter must be one character");
    csv.delimiter = o.delimiter.front();
  }
  if (o.path == "-") return load_csv(std::cin, csv);
  return load_csv_file(o.path, csv);
}

void emit(Context& ctx, const std::string& output, const std::string& text) {
  ctx.stage = "write";
  if (output.empty() || output == "-") {
    ctx.out << text;
  } else {
    write_file_atomic(output, text);
  }
}

void emit_json(Context& ctx, const std::string& output, const Json& j) {
  emit(ctx, output, j.dump(2) + "\n");
}

// A model either fitted to data or built from --coef values.
struct ModelOptions {
  std::string formula;
  std::string coef;
  std::string coef_p;
  bool exact_fit = false;
  bool strict_hierarchy = false;
  CLI::Option* strict_opt = nullptr;
};

void add_model_options(CLI::App* cmd, ModelOptions& o, bool allow_coef) {
  cmd->add_option("--formula,-f", o.formula, "model formula, e.g. 'Y ~ x1 + x2 + x1:x2'")->required();
  if (allow_coef) {
    cmd->add_option("--coef", o.coef,
                    "comma-separated coefficients (intercept first) used instead of fitting");
    cmd->add_option("--coef-p", o.coef_p, "comma-separated p-values matching --coef");
  }
  cmd->add_flag("--exact-fit", o.exact_fit, "allow a saturated fit (zero residual dof)");
  o.strict_opt = cmd->add_flag("--strict-hierarchy", o.strict_hierarchy,
                               "treat hierarchy violations as errors");
}

struct ModelSource {
  FittedModel model;
  std::optional<LoadResult> data;
  std::vector<Advisory> warnings;
};

ModelSource obtain_model(Context& ctx, const ModelOptions& mo, const DataOptions& dopt) {
  ModelSource src;
  if (!dopt.path.empty()) src.data = load_data(ctx, dopt);
  ctx.stage = "formula";
  const ModelSpec spec = parse_formula(mo.formula);
  const bool strict = mo.strict_opt && mo.strict_opt->count() ? mo.strict_hierarchy
                                                              : ctx.config.strict_hierarchy;
  enforce_hierarchy(spec, strict ? HierarchyMode::Strict : HierarchyMode::Warn);
  if (!mo.coef.empty()) {
    ctx.stage = "coef";
    std::optional<std::vector<double>> p;
    if (!mo.coef_p.empty()) p = number_list(mo.coef_p, "--coef-p");
    src.model = from_coefficients(spec, number_list(mo.coef, "--coef"), p);
    for (auto& w : enforce_hierarchy(spec, HierarchyMode::Warn)) src.warnings.push_back({"hierarchy", w});
  } else {
    if (!src.data) throw Error(ErrorCode::Argument, "either --data or --coef is required");
    ctx.stage = "fit";
    FitOptions fo;
    fo.allow_exact_fit = mo.exact_fit;
    src.model = fit(src.data->data, spec, fo);
    src.warnings = advisories(src.data->data, spec, ctx.config.correlation_threshold);
  }
  return src;
}

Json model_json(const ModelSource& src) {
  Json j = model_table(src.model);
  j["source"] = src.model.from_data ? "fit" : "coef";
  return j;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  DataOptions data;
  ModelOptions model;
  std::string format = "json";
  std::string output;
};

void cmd_fit(Context& ctx, const FitArgs& a) {
  auto src = obtain_model(ctx, a.model, a.data);
  ctx.stage = "report";
  if (a.format == "text") {
    std::string text = model_table_text(src.model);
    for (const auto& w : src.warnings) text += "warning: " + w.message + "\n";
    emit(ctx, a.output, text);
    return;
  }
  Json j = report_header("fit");
  j["dropped_rows"] = src.data->dropped_rows;
  j["model"] = model_json(src);
  j["fit"] = fit_stats(src.model);
  j["warnings"] = advisories_json(src.warnings);
  emit_json(ctx, a.output, j);
}

// ---------------------------------------------------------------------------
// conditional / effect

struct ConditionalArgs {
  DataOptions data;
  ModelOptions model;
  std::string target;
  std::vector<std::string> fix;
  std::string sweep;
  std::string plot;
  std::optional<double> at;
  std::string output;
};

Json conditional_json(const ConditionalResponse& cr, const std::vector<CorrelationCaution>& cautions) {
  Json poly = Json::array();
  for (double c : cr.poly) poly.push_back(number(c));
  Json j{{"target", cr.target}, {"fixed", assignment_json(cr.fixed)}, {"degree", cr.degree()},
         {"poly", poly}};
  if (cr.degree() <= 2) {
    j["t"] = Json{{"T0", number(cr.poly[0])},
                  {"T_linear", number(cr.poly.size() > 1 ? cr.poly[1] : 0.0)},
                  {"T_quad", number(cr.poly.size() > 2 ? cr.poly[2] : 0.0)}};
  }
  Json cj = Json::array();
  for (const auto& c : cautions) {
    cj.push_back(Json{{"predictor", c.predictor}, {"r", number(c.r)}});
  }
  j["cautions"] = cj;
  return j;
}

void cmd_conditional(Context& ctx, const ConditionalArgs& a, bool effect) {
  auto src = obtain_model(ctx, a.model, a.data);
  ctx.stage = "conditional";
  std::optional<QuartileSummary> summary;
  if (src.data) summary = quartiles(src.data->data);
  const Assignment fixed =
      resolve_fixed(parse_fixes(a.fix), summary ? &*summary : nullptr);
  const auto cr = derive(src.model, a.target, fixed);

  std::vector<CorrelationCaution> cautions;
  if (src.data) {
    std::vector<std::string> cols;
    for (const auto& name : src.model.spec.predictors()) {
      if (src.data->data.has_column(name) && column_stats(src.data->data, name).variance > 0.0) {
        cols.push_back(name);
      }
    }
    if (cols.size() >= 2 && src.data->data.rows() >= 3) {
      cautions = correlation_cautions(cr, pearson_matrix(src.data->data, cols),
                                      ctx.config.correlation_threshold);
    }
  }

  std::optional<SweepSpec> grid;
  if (!a.sweep.empty()) {
    grid = parse_sweep(a.sweep);
  } else if (!a.plot.empty()) {
    if (!src.data || !src.data->data.has_column(a.target)) {
      throw Error(ErrorCode::Argument, "--plot without --sweep needs data holding the target column");
    }
    const auto s = column_stats(src.data->data, a.target);
    grid = SweepSpec{s.min, s.max, 101};
  }

  Json j = report_header(effect ? "effect" : "conditional");
  j["model"] = model_json(src);
  j["fit"] = fit_stats(src.model);
  j["conditional"] = conditional_json(cr, cautions);
  if (effect) {
    const double delta = unit_effect(src.model, a.target, fixed, *a.at);
    j["effect"] = Json{{"target", a.target}, {"at", number(*a.at)}, {"delta", number(delta)}};
  }
  if (grid) {
    const auto points = sweep(cr, grid->lo, grid->hi, grid->steps);
    Json rows = Json::array();
    Tsv tsv;
    tsv.comments.push_back(std::string(kSchema) + " conditional");
    std::string fixed_text;
    for (const auto& [k, v] : fixed) fixed_text += (fixed_text.empty() ? "" : " ") + k + "=" + format_number(v);
    tsv.comments.push_back("target=" + a.target + " fixed: " + fixed_text);
    tsv.header = {a.target, src.model.spec.response};
    for (const auto& [x, y] : points) {
      rows.push_back(Json{{"x", number(x)}, {"y", number(y)}});
      tsv.rows.push_back({x, y});
    }
    j["sweep"] = rows;
    if (!a.plot.empty()) {
      ctx.stage = "write";
      write_file_atomic(a.plot, tsv.render());
    }
  }
  j["warnings"] = advisories_json(src.warnings);
  emit_json(ctx, a.output, j);
}

// ---------------------------------------------------------------------------
// bridge

struct BridgeArgs {
  DataOptions data;
  std::string response;
  std::string predictors;
  std::string target;
  std::string other;
  std::string constants;
  std::optional<int> expected_sign;
  std::string output;
};

Json name_map(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

void cmd_bridge(Context& ctx, const BridgeArgs& a) {
  BridgeReport rep;
  std::optional<AbbottCarrollResult> ac;
  if (!a.constants.empty()) {
    ctx.stage = "bridge";
    if (a.other.empty()) throw Error(ErrorCode::Argument, "--constants needs --other");
    const auto k = number_list(a.constants, "--constants");
    if (k.size() != 5) {
      throw Error(ErrorCode::Argument,
                  "--constants expects a_target,a_other,c_target_on_other,c_other_on_target,r");
    }
    rep = bridge_from_constants(a.target, a.other, SlrConstants{k[0], k[1], k[2], k[3], k[4]},
                                a.expected_sign);
  } else {
    if (a.data.path.empty() || a.response.empty() || a.predictors.empty()) {
      throw Error(ErrorCode::Argument, "bridge needs --data, --response and --predictors (or --constants)");
    }
    const auto data = load_data(ctx, a.data);
    ctx.stage = "bridge";
    const auto predictors = name_list(a.predictors, "--predictors");
    rep = bridge(data.data, a.response, predictors, a.target, a.expected_sign);
  }
  const auto findings = detect_paradox(rep, a.expected_sign, ctx.config.correlation_threshold);

  Json j = report_header("bridge");
  Json b{{"target", rep.target},
         {"a", number(rep.a)},
         {"b", number(rep.b)},
         {"slr_slopes", name_map(rep.slr_slopes)},
         {"mlr_coefficients", name_map(rep.mlr_coefficients)},
         {"c_target_on", name_map(rep.c_target_on)},
         {"c_on_target", name_map(rep.c_on_target)},
         {"r", name_map(rep.r)},
         {"ac_sum", number(rep.ac_sum)},
         {"ac_discrepancy", number(std::fabs(rep.ac_sum - rep.a))},
         {"sign_flip", rep.sign_flip}};
  b["expectation_violation"] =
      rep.expectation_violation ? Json(*rep.expectation_violation) : Json(nullptr);
  if (rep.closure) {
    b["two_predictor"] = Json{{"other", rep.closure->other},
                              {"b_target", number(rep.closure->reconstructed.b_target)},
                              {"b_other", number(rep.closure->reconstructed.b_other)},
                              {"residual_target", number(rep.closure->residual_target)},
                              {"residual_other", number(rep.closure->residual_other)}};
  }
  j["bridge"] = b;
  Json fj = Json::array();
  for (const auto& f : findings) {
    fj.push_back(Json{{"kind", finding_name(f.kind)}, {"predictor", f.predictor}, {"message", f.message}});
  }
  j["findings"] = fj;
  emit_json(ctx, a.output, j);
}

// ---------------------------------------------------------------------------
// residualize

struct ResidualizeArgs {
  DataOptions data;
  std::string target;
  std::string others;
  std::string response;
  std::string csv;
  std::string output;
};

void cmd_residualize(Context& ctx, const ResidualizeArgs& a) {
  const auto data = load_data(ctx, a.data);
  ctx.stage = "residualize";
  const auto others = a.others.empty() ? std::vector<std::string>{} : name_list(a.others, "--others");
  const auto res = residualize(data.data, a.target, others);

  Json j = report_header("residualize");
  Json values = Json::array();
  for (double v : res.values) values.push_back(number(v));
  j["residualized"] = Json{{"name", res.name},
                           {"target", a.target},
                           {"intercept", number(res.intercept)},
                           {"slopes", name_map(res.slopes)},
                           {"values", values}};
  if (!a.response.empty()) {
    // Simple slope of the response on x* against the multiple-regression coefficient.
    const auto slope = simple_regression(res.values, data.data.column(a.response)).slope;
    ModelSpec spec{a.response, true, {Term::linear(a.target)}};
    for (const auto& o : others) spec.terms.push_back(Term::linear(o));
    const double b = fit(data.data, spec).coefficient(Term::linear(a.target));
    j["check"] = Json{{"response", a.response},
                      {"slope_on_residualized", number(slope)},
                      {"mlr_coefficient", number(b)},
                      {"difference", number(std::fabs(slope - b))}};
  }
  if (!a.csv.empty()) {
    ctx.stage = "write";
    const auto extended = data.data.with_column(Column{res.name, res.values});
    std::string text;
    const auto names = extended.names();
    for (std::size_t c = 0; c < names.size(); ++c) text += (c ? "," : "") + names[c];
    text += "\n";
    for (std::size_t i = 0; i < extended.rows(); ++i) {
      for (std::size_t c = 0; c < names.size(); ++c) {
        text += (c ? "," : "") + format_number(extended.columns()[c].values[i]);
      }
      text += "\n";
    }
    write_file_atomic(a.csv, text);
  }
  emit_json(ctx, a.output, j);
}

// ---------------------------------------------------------------------------
// stepwise / subset

struct StepwiseArgs {
  DataOptions data;
  ModelOptions model;
  double alpha = 0.05;
  CLI::Option* alpha_opt = nullptr;
  std::vector<std::string> protect;
  bool no_hierarchy = false;
  std::string output;
};

Json step_json(const StepwiseStep& s, std::size_t index) {
  return Json{{"step", index},
              {"removed", s.removed ? Json(s.removed->label()) : Json(nullptr)},
              {"removed_p", s.removed ? number(s.removed_p) : Json(nullptr)},
              {"terms", s.fit.spec.terms.size()},
              {"formula", print_formula(s.fit.spec)},
              {"r2", number(s.fit.r2)},
              {"r2_adj", number(s.fit.r2_adj)}};
}

void cmd_stepwise(Context& ctx, const StepwiseArgs& a) {
  const auto data = load_data(ctx, a.data);
  ctx.stage = "formula";
  const auto start = parse_formula(a.model.formula);
  StepwiseOptions so;
  so.alpha = a.alpha_opt && a.alpha_opt->count() ? a.alpha : ctx.config.alpha;
  so.enforce_hierarchy = !a.no_hierarchy;
  for (const auto& p : a.protect) so.protected_terms.push_back(parse_term(p));
  ctx.stage = "stepwise";
  const auto result = backward_stepwise(data.data, start, so);

  Json j = report_header("stepwise");
  j["alpha"] = number(so.alpha);
  Json trace = Json::array();
  for (std::size_t i = 0; i < result.trace.size(); ++i) trace.push_back(step_json(result.trace[i], i));
  j["trace"] = trace;
  j["model"] = model_table(result.final_model());
  j["fit"] = fit_stats(result.final_model());
  j["warnings"] = advisories_json(result.warnings);
  emit_json(ctx, a.output, j);
}

struct SubsetArgs {
  DataOptions data;
  std::string response;
  std::string pool;
  std::size_t size = 1;
  std::size_t top = 0;
  unsigned threads = 0;
  CLI::Option* threads_opt = nullptr;
  std::string output;
};

void cmd_subset(Context& ctx, const SubsetArgs& a) {
  const auto data = load_data(ctx, a.data);
  ctx.stage = "formula";
  std::vector<Term> pool;
  for (const auto& t : split(a.pool, ',')) pool.push_back(parse_term(t));
  SubsetOptions so;
  so.keep = a.top;
  so.threads = a.threads_opt && a.threads_opt->count() ? a.threads : ctx.config.threads;
  ctx.stage = "subset";
  const auto result = best_subset(data.data, a.response, pool, a.size, so);

  Json j = report_header("subset");
  j["candidates"] = result.candidates;
  Json ranked = Json::array();
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    const auto& m = result.ranked[i];
    ranked.push_back(Json{{"rank", i + 1},
                          {"formula", print_formula(m.spec)},
                          {"r2", number(m.r2)},
                          {"r2_adj", number(m.r2_adj)}});
  }
  j["ranked"] = ranked;
  j["best"] = model_table(result.ranked.front());
  j["skipped"] = result.skipped;
  j["warnings"] = advisories_json(result.warnings);
  emit_json(ctx, a.output, j);
}

// ---------------------------------------------------------------------------
// ellipse

struct EllipseArgs {
  DataOptions data;
  std::string x;
  std::string y;
  double level = 0.95;
  CLI::Option* level_opt = nullptr;
  std::vector<std::string> points;
  std::string plot;
  std::size_t vertices = 360;
  std::string output;
};

void cmd_ellipse(Context& ctx, const EllipseArgs& a) {
  const auto data = load_data(ctx, a.data);
  ctx.stage = "ellipse";
  const double level = a.level_opt && a.level_opt->count() ? a.level : ctx.config.level;
  const auto e = ellipse(data.data, a.x, a.y, level);

  Json j = report_header("ellipse");
  j["ellipse"] = Json{{"pair", Json::array({a.x, a.y})},
                      {"center", Json::array({number(e.center(0)), number(e.center(1))})},
                      {"shape", Json::array({Json::array({number(e.shape(0, 0)), number(e.shape(0, 1))}),
                                             Json::array({number(e.shape(1, 0)), number(e.shape(1, 1))})})},
                      {"level", number(e.level)},
                      {"threshold", number(e.threshold)},
                      {"eccentricity", number(e.eccentricity())},
                      {"r", number(pearson_r(data.data.column(a.x), data.data.column(a.y)))}};
  Json pts = Json::array();
  for (const auto& p : a.points) {
    const auto xy = number_list(p, "--point");
    if (xy.size() != 2) throw Error(ErrorCode::Argument, "--point expects x,y");
    const Eigen::Vector2d q(xy[0], xy[1]);
    pts.push_back(Json{{"point", Json::array({number(xy[0]), number(xy[1])})},
                       {"d2", number(e.mahalanobis2(q))},
                       {"region", region_name(classify_point(e, q))}});
  }
  j["points"] = pts;
  if (!a.plot.empty()) {
    Tsv tsv;
    tsv.comments.push_back(std::string(kSchema) + " ellipse");
    tsv.comments.push_back("pair=" + a.x + "," + a.y + " level=" + format_number(e.level) +
                           " threshold=" + format_number(e.threshold));
    tsv.header = {a.x, a.y};
    for (const auto& v : e.boundary(a.vertices)) tsv.rows.push_back({v(0), v(1)});
    ctx.stage = "write";
    write_file_atomic(a.plot, tsv.render());
  }
  emit_json(ctx, a.output, j);
}

// ---------------------------------------------------------------------------
// action

struct ActionArgs {
  DataOptions data;
  ModelOptions model;
  std::string f1;
  std::string f2;
  double alpha = 0.05;
  CLI::Option* alpha_opt = nullptr;
  double tolerance = 0.05;
  CLI::Option* tolerance_opt = nullptr;
  std::vector<std::string> levels;
  std::vector<std::string> fix;
  std::string output;
};

void cmd_action(Context& ctx, const ActionArgs& a) {
  auto src = obtain_model(ctx, a.model, a.data);
  ctx.stage = "action";
  ActionOptions ao;
  ao.alpha = a.alpha_opt && a.alpha_opt->count() ? a.alpha : ctx.config.alpha;
  ao.control_tolerance =
      a.tolerance_opt && a.tolerance_opt->count() ? a.tolerance : ctx.config.control_tolerance;
  std::optional<QuartileSummary> summary;
  if (src.data) summary = quartiles(src.data->data);
  ao.others = resolve_fixed(parse_fixes(a.fix), summary ? &*summary : nullptr);

  std::map<std::string, std::pair<double, double>> given;
  for (const auto& item : a.levels) {
    auto [name, range] = key_value(item, "--levels");
    given[name] = parse_range(range, "--levels");
  }
  auto levels_for = [&](const std::string& f) -> std::pair<double, double> {
    if (auto it = given.find(f); it != given.end()) return it->second;
    if (src.data && src.data->data.has_column(f)) {
      const auto s = column_stats(src.data->data, f);
      if (s.min < s.max) return {s.min, s.max};
    }
    return {-1.0, 1.0};
  };
  ao.levels1 = levels_for(a.f1);
  ao.levels2 = levels_for(a.f2);
  const auto cls = classify_action(src.model, a.f1, a.f2, ao);

  Json j = report_header("action");
  j["model"] = model_json(src);
  j["fit"] = fit_stats(src.model);
  j["action"] = Json{{"factors", Json::array({a.f1, a.f2})},
                     {"label", action_name(cls.label)},
                     {"alpha", number(ao.alpha)},
                     {"levels", Json{{a.f1, Json::array({number(ao.levels1.first), number(ao.levels1.second)})},
                                     {a.f2, Json::array({number(ao.levels2.first), number(ao.levels2.second)})}}},
                     {"cross_coef", number(cls.cross_coef)},
                     {"cross_p", cls.cross_p ? number(*cls.cross_p) : Json(nullptr)},
                     {"main", Json::array({number(cls.main1), number(cls.main2)})},
                     {"control", number(cls.control)},
                     {"effect1", number(cls.effect1)},
                     {"effect2", number(cls.effect2)},
                     {"joint", number(cls.joint)},
                     {"interaction", number(cls.interaction)},
                     {"response_range", number(cls.response_range)}};
  j["warnings"] = advisories_json(src.warnings);
  emit_json(ctx, a.output, j);
}

// ---------------------------------------------------------------------------
// corr / summary

struct CorrArgs {
  DataOptions data;
  std::string columns;
  std::string format = "json";
  std::string output;
};

void cmd_corr(Context& ctx, const CorrArgs& a) {
  const auto data = load_data(ctx, a.data);
  ctx.stage = "corr";
  const auto cols = a.columns.empty() ? data.data.names() : name_list(a.columns, "--columns");
  const auto rep = pearson_matrix(data.data, cols);
  const auto k = static_cast<Eigen::Index>(cols.size());

  if (a.format == "text") {
    // r above the diagonal, p below it.
    std::string text = "n = " + std::to_string(rep.n) + "\n";
    char cell[64];
    std::snprintf(cell, sizeof cell, "%-14s", "");
    text += cell;
    for (const auto& c : cols) {
      std::snprintf(cell, sizeof cell, "%10s", c.c_str());
      text += cell;
    }
    text += "\n";
    for (Eigen::Index i = 0; i < k; ++i) {
      std::snprintf(cell, sizeof cell, "%-14s", cols[static_cast<std::size_t>(i)].c_str());
      text += cell;
      for (Eigen::Index jj = 0; jj < k; ++jj) {
        if (i == jj) {
          std::snprintf(cell, sizeof cell, "%10s", "-");
        } else if (jj > i) {
          std::snprintf(cell, sizeof cell, "%10.3f", rep.r(i, jj));
        } else if (rep.p(i, jj) < 0.001) {
          std::snprintf(cell, sizeof cell, "%10s", "<0.001");
        } else {
          std::snprintf(cell, sizeof cell, "%10.3f", rep.p(i, jj));
        }
        text += cell;
      }
      text += "\n";
    }
    emit(ctx, a.output, text);
    return;
  }

  Json j = report_header("corr");
  j["n"] = rep.n;
  j["names"] = cols;
  Json r = Json::array();
  Json p = Json::array();
  for (Eigen::Index i = 0; i < k; ++i) {
    Json rr = Json::array();
    Json pr = Json::array();
    for (Eigen::Index jj = 0; jj < k; ++jj) {
      rr.push_back(number(rep.r(i, jj)));
      pr.push_back(i == jj ? Json("—") : number(rep.p(i, jj)));
    }
    r.push_back(rr);
    p.push_back(pr);
  }
  j["r"] = r;
  j["p"] = p;
  emit_json(ctx, a.output, j);
}

struct SummaryArgs {
  DataOptions data;
  std::string output;
};

void cmd_summary(Context& ctx, const SummaryArgs& a) {
  const auto data = load_data(ctx, a.data);
  ctx.stage = "summary";
  const auto q = quartiles(data.data);
  Json j = report_header("summary");
  j["n"] = data.data.rows();
  j["dropped_rows"] = data.dropped_rows;
  Json rows = Json::array();
  for (const auto& row : q.rows) {
    const auto s = column_stats(data.data, row.name);
    rows.push_back(Json{{"name", row.name},
                        {"min", number(row.min)},
                        {"q25", number(row.q25)},
                        {"mean", number(row.mean)},
                        {"q75", number(row.q75)},
                        {"max", number(row.max)},
                        {"variance", number(s.variance)},
                        {"singleton", s.singleton}});
  }
  j["columns"] = rows;
  emit_json(ctx, a.output, j);
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear regression with cross and quadratic terms and conditional response analysis",
               "condreg"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 std::string("JSON config file (default: $") + kConfigEnv + ")");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model and print its coefficient table");
  add_data_options(fit_cmd, fit_args.data, true);
  add_model_options(fit_cmd, fit_args.model, false);
  fit_cmd->add_option("--format", fit_args.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  fit_cmd->add_option("--output,-o", fit_args.output, "output path (default stdout)");

  ConditionalArgs cond_args;
  ConditionalArgs effect_args;
  auto add_conditional = [&](const char* name, const char* help, ConditionalArgs& ca) {
    auto* cmd = app.add_subcommand(name, help);
    add_data_options(cmd, ca.data, false);
    add_model_options(cmd, ca.model, true);
    cmd->add_option("--target,-t", ca.target, "predictor left free")->required();
    cmd->add_option("--fix", ca.fix, "name=value or name=min|q25|mean|q75|max (repeatable)");
    cmd->add_option("--sweep", ca.sweep, "min:max:steps grid over the target");
    cmd->add_option("--plot", ca.plot, "write the swept curve as TSV to this path");
    cmd->add_option("--output,-o", ca.output, "output path (default stdout)");
    return cmd;
  };
  auto* cond_cmd = add_conditional("conditional", "conditional response of one predictor", cond_args);
  auto* effect_cmd = add_conditional("effect", "unit-change effect of one predictor", effect_args);
  effect_cmd->add_option("--at", effect_args.at, "starting value of the target")->required();

  BridgeArgs bridge_args;
  auto* bridge_cmd = app.add_subcommand("bridge", "relate simple and multiple regression coefficients");
  add_data_options(bridge_cmd, bridge_args.data, false);
  bridge_cmd->add_option("--response,-y", bridge_args.response, "response column");
  bridge_cmd->add_option("--predictors,-x", bridge_args.predictors, "comma-separated predictors");
  bridge_cmd->add_option("--target,-t", bridge_args.target, "predictor to report on")->required();
  bridge_cmd->add_option("--other", bridge_args.other, "second predictor for --constants");
  bridge_cmd->add_option("--constants", bridge_args.constants,
                         "a_target,a_other,c_target_on_other,c_other_on_target,r");
  bridge_cmd->add_option("--expected-sign", bridge_args.expected_sign, "+1 or -1")
      ->check(CLI::IsMember({-1, 1}));
  bridge_cmd->add_option("--output,-o", bridge_args.output, "output path (default stdout)");

  ResidualizeArgs resid_args;
  auto* resid_cmd = app.add_subcommand("residualize", "strip a predictor of its linear dependence on others");
  add_data_options(resid_cmd, resid_args.data, true);
  resid_cmd->add_option("--target,-t", resid_args.target, "predictor to residualize")->required();
  resid_cmd->add_option("--others", resid_args.others, "comma-separated co-predictors");
  resid_cmd->add_option("--response,-y", resid_args.response, "also compare slopes for this response");
  resid_cmd->add_option("--csv", resid_args.csv, "write the data plus the new column as CSV");
  resid_cmd->add_option("--output,-o", resid_args.output, "output path (default stdout)");

  StepwiseArgs step_args;
  auto* step_cmd = app.add_subcommand("stepwise", "backward stepwise elimination");
  add_data_options(step_cmd, step_args.data, true);
  step_cmd->add_option("--formula,-f", step_args.model.formula, "starting model formula")->required();
  step_args.alpha_opt = step_cmd->add_option("--alpha", step_args.alpha, "removal threshold")
                            ->check(CLI::Range(0.0, 1.0));
  step_cmd->add_option("--protect", step_args.protect, "term never removed (repeatable)");
  step_cmd->add_flag("--no-hierarchy", step_args.no_hierarchy,
                     "allow removing linear terms still used by higher-order terms");
  step_cmd->add_option("--output,-o", step_args.output, "output path (default stdout)");

  SubsetArgs subset_args;
  auto* subset_cmd = app.add_subcommand("subset", "exhaustive best-subset search by R2");
  add_data_options(subset_cmd, subset_args.data, true);
  subset_cmd->add_option("--response,-y", subset_args.response, "response column")->required();
  subset_cmd->add_option("--pool", subset_args.pool, "comma-separated candidate terms")->required();
  subset_cmd->add_option("--size,-k", subset_args.size, "terms per model")->required();
  subset_cmd->add_option("--top", subset_args.top, "report only the best N models");
  subset_args.threads_opt = subset_cmd->add_option("--threads", subset_args.threads, "worker threads");
  subset_cmd->add_option("--output,-o", subset_args.output, "output path (default stdout)");

  EllipseArgs ellipse_args;
  auto* ellipse_cmd = app.add_subcommand("ellipse", "confidence ellipse of a predictor pair");
  add_data_options(ellipse_cmd, ellipse_args.data, true);
  ellipse_cmd->add_option("--x", ellipse_args.x, "first column")->required();
  ellipse_cmd->add_option("--y", ellipse_args.y, "second column")->required();
  ellipse_args.level_opt = ellipse_cmd->add_option("--level", ellipse_args.level, "coverage level");
  ellipse_cmd->add_option("--point", ellipse_args.points, "x,y point to classify (repeatable)");
  ellipse_cmd->add_option("--plot", ellipse_args.plot, "write the boundary polyline as TSV");
  ellipse_cmd->add_option("--vertices", ellipse_args.vertices, "boundary vertices (default 360)")
      ->check(CLI::Range(3, 100000));
  ellipse_cmd->add_option("--output,-o", ellipse_args.output, "output path (default stdout)");

  ActionArgs action_args;
  auto* action_cmd = app.add_subcommand("action", "classify the combined action of two factors");
  add_data_options(action_cmd, action_args.data, false);
  add_model_options(action_cmd, action_args.model, true);
  action_cmd->add_option("--f1", action_args.f1, "first factor")->required();
  action_cmd->add_option("--f2", action_args.f2, "second factor")->required();
  action_args.alpha_opt = action_cmd->add_option("--alpha", action_args.alpha, "significance level");
  action_args.tolerance_opt =
      action_cmd->add_option("--tolerance", action_args.tolerance, "control-level tolerance");
  action_cmd->add_option("--levels", action_args.levels, "name=low:high (repeatable)");
  action_cmd->add_option("--fix", action_args.fix, "values of other predictors (repeatable)");
  action_cmd->add_option("--output,-o", action_args.output, "output path (default stdout)");

  CorrArgs corr_args;
  auto* corr_cmd = app.add_subcommand("corr", "Pearson correlation matrix with p-values");
  add_data_options(corr_cmd, corr_args.data, true);
  corr_cmd->add_option("--columns", corr_args.columns, "comma-separated columns (default all)");
  corr_cmd->add_option("--format", corr_args.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  corr_cmd->add_option("--output,-o", corr_args.output, "output path (default stdout)");

  SummaryArgs summary_args;
  auto* summary_cmd = app.add_subcommand("summary", "quartile summary of every column");
  add_data_options(summary_cmd, summary_args.data, true);
  summary_cmd->add_option("--output,-o", summary_args.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "condreg: error[usage] arguments: " << one_line(e.what()) << "\n";
    return 2;
  }

  Context ctx{out, {}, "config"};
  try {
    ctx.config = load_config(config_path.empty() ? std::nullopt
                                                 : std::optional<std::filesystem::path>(config_path));
    if (app.got_subcommand(fit_cmd)) cmd_fit(ctx, fit_args);
    else if (app.got_subcommand(cond_cmd)) cmd_conditional(ctx, cond_args, false);
    else if (app.got_subcommand(effect_cmd)) cmd_conditional(ctx, effect_args, true);
    else if (app.got_subcommand(bridge_cmd)) cmd_bridge(ctx, bridge_args);
    else if (app.got_subcommand(resid_cmd)) cmd_residualize(ctx, resid_args);
    else if (app.got_subcommand(step_cmd)) cmd_stepwise(ctx, step_args);
    else if (app.got_subcommand(subset_cmd)) cmd_subset(ctx, subset_args);
    else if (app.got_subcommand(ellipse_cmd)) cmd_ellipse(ctx, ellipse_args);
    else if (app.got_subcommand(action_cmd)) cmd_action(ctx, action_args);
    else if (app.got_subcommand(corr_cmd)) cmd_corr(ctx, corr_args);
    else if (app.got_subcommand(summary_cmd)) cmd_summary(ctx, summary_args);
  } catch (const Error& e) {
    err << "condreg: error[" << code_name(e.code()) << "] " << ctx.stage << ": " << one_line(e.what())
        << "\n";
    const bool io = e.code() == ErrorCode::Io || ctx.stage == "load" || ctx.stage == "write";
    return io ? 1 : 2;
  } catch (const std::exception& e) {
    err << "condreg: error[internal] " << ctx.stage << ": " << one_line(e.what()) << "\n";
    return 2;
  }
  return 0;
}

}  // namespace condreg::app
