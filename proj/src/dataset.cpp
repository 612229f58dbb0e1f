#include "condreg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "condreg/distributions.hpp"
#include "condreg/error.hpp"

namespace condreg {

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw Error(ErrorCode::EmptyData, "dataset has no columns");
  rows_ = columns_.front().values.size();
  if (rows_ == 0) throw Error(ErrorCode::EmptyData, "dataset has no rows");
  std::set<std::string_view> seen;
  for (const auto& c : columns_) {
    if (c.name.empty()) throw Error(ErrorCode::Schema, "empty column name");
    if (!seen.insert(c.name).second) {
      throw Error(ErrorCode::Schema, "duplicate column name '" + c.name + "'");
    }
    if (c.values.size() != rows_) {
      throw Error(ErrorCode::Schema, "column '" + c.name + "' has " +
                                         std::to_string(c.values.size()) + " values, expected " +
                                         std::to_string(rows_));
    }
    for (double v : c.values) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::Schema, "column '" + c.name + "' holds a non-finite value");
      }
    }
  }
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

bool Dataset::has_column(std::string_view name) const noexcept {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

std::span<const double> Dataset::column(std::string_view name) const {
  for (const auto& c : columns_) {
    if (c.name == name) return c.values;
  }
  throw Error(ErrorCode::UnknownColumn, "unknown column '" + std::string(name) + "'");
}

Eigen::Map<const Eigen::VectorXd> Dataset::vector(std::string_view name) const {
  auto values = column(name);
  return {values.data(), static_cast<Eigen::Index>(values.size())};
}

Dataset Dataset::with_column(Column column) const {
  auto cols = columns_;
  cols.push_back(std::move(column));
  return Dataset(std::move(cols));
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) {
    Column out{c.name, {}};
    out.values.reserve(indices.size());
    for (auto i : indices) {
      if (i >= rows_) throw Error(ErrorCode::Argument, "row index out of range");
      out.values.push_back(c.values[i]);
    }
    cols.push_back(std::move(out));
  }
  return Dataset(std::move(cols));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, "csv line " + std::to_string(line) + ": " + what);
}

std::vector<Record> split_records(std::string_view text, char delim) {
  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool after_quote = false;  // just closed a quoted field

  auto finish_field = [&] {
    current.fields.push_back(field_was_quoted ? field : std::string(trim(field)));
    field.clear();
    field_was_quoted = false;
    after_quote = false;
  };
  auto finish_record = [&] {
    finish_field();
    const bool blank = current.fields.size() == 1 && current.fields.front().empty();
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == delim) {
      finish_field();
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      ++line;
      finish_record();
    } else if (ch == '"') {
      if (!trim(field).empty() || field_was_quoted) parse_error(line, "stray quote inside field");
      field.clear();
      in_quotes = true;
      field_was_quoted = true;
    } else {
      if (after_quote) {
        if (ch == ' ' || ch == '\t') continue;
        parse_error(line, "unexpected character after closing quote");
      }
      field.push_back(ch);
    }
  }
  if (in_quotes) parse_error(current.line, "unterminated quoted field");
  if (!field.empty() || !current.fields.empty() || field_was_quoted) finish_record();
  return records;
}

}  // namespace

bool parse_number(std::string_view text, double& out) noexcept {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return false;
  out = value;
  return true;
}

LoadResult load_csv(std::istream& in, const CsvOptions& options) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorCode::Io, "failed reading csv stream");
  std::string_view view = text;
  if (view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);

  auto records = split_records(view, options.delimiter);
  if (records.empty()) throw Error(ErrorCode::EmptyData, "csv input is empty");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  const std::size_t width = records.front().fields.size();
  if (options.header) {
    names = records.front().fields;
    first_data = 1;
    std::set<std::string_view> seen;
    for (const auto& n : names) {
      if (n.empty()) throw Error(ErrorCode::Schema, "empty header name");
      if (!seen.insert(n).second) throw Error(ErrorCode::Schema, "duplicate header name '" + n + "'");
    }
  } else {
    for (std::size_t j = 0; j < width; ++j) names.push_back("V" + std::to_string(j + 1));
  }

  std::vector<Column> columns;
  for (auto& n : names) columns.push_back(Column{n, {}});
  std::size_t dropped = 0;
  std::vector<double> row(width);
  for (std::size_t r = first_data; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != width) {
      parse_error(rec.line, "expected " + std::to_string(width) + " fields, found " +
                                std::to_string(rec.fields.size()));
    }
    bool usable = true;
    for (std::size_t j = 0; j < width && usable; ++j) usable = parse_number(rec.fields[j], row[j]);
    if (!usable) {
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j < width; ++j) columns[j].values.push_back(row[j]);
  }
  if (columns.front().values.empty()) {
    throw Error(ErrorCode::EmptyData,
                "no usable rows; dropped=" + std::to_string(dropped));
  }
  return LoadResult{Dataset(std::move(columns)), dropped};
}

LoadResult load_csv_file(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return load_csv(in, options);
}

// ---------------------------------------------------------------------------
// Descriptive statistics

ColumnStats column_stats(const Dataset& d, std::string_view col) {
  const auto values = d.column(col);
  ColumnStats s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  if (s.n == 1) {
    s.singleton = true;
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss / static_cast<double>(s.n - 1);
  return s;
}

double quantile(std::span<const double> values, double prob) {
  if (values.empty()) throw Error(ErrorCode::EmptyData, "quantile of empty sequence");
  if (!(prob >= 0.0 && prob <= 1.0)) throw Error(ErrorCode::Argument, "quantile probability outside [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

const QuartileRow& QuartileSummary::at(std::string_view name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw Error(ErrorCode::UnknownColumn, "no summary for column '" + std::string(name) + "'");
}

QuartileSummary quartiles(const Dataset& d) {
  QuartileSummary out;
  for (const auto& c : d.columns()) {
    const auto stats = column_stats(d, c.name);
    // Clamp so that rounding in the mean never escapes [min, max].
    const double mean = std::clamp(stats.mean, stats.min, stats.max);
    out.rows.push_back(QuartileRow{c.name, stats.min, quantile(c.values, 0.25), mean,
                                   quantile(c.values, 0.75), stats.max});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Correlation

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::Argument, "pearson_r: length mismatch");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw Error(ErrorCode::DegenerateColumn, "pearson_r: zero-variance input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::Argument, "pearson p-value needs n >= 3");
  if (!(r >= -1.0 && r <= 1.0)) throw Error(ErrorCode::Argument, "correlation outside [-1, 1]");
  const double dof = static_cast<double>(n) - 2.0;
  const double denom = 1.0 - r * r;
  if (denom <= 0.0) return std::numeric_limits<double>::min();
  const double t = r * std::sqrt(dof) / std::sqrt(denom);
  return std::max(dist::student_t_two_sided(t, dof), std::numeric_limits<double>::min());
}

double CorrelationReport::r_between(std::string_view a, std::string_view b) const {
  return r(static_cast<Eigen::Index>(index_of(a)), static_cast<Eigen::Index>(index_of(b)));
}

std::size_t CorrelationReport::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw Error(ErrorCode::UnknownColumn, "column '" + std::string(name) + "' not in correlation report");
}

CorrelationReport pearson_matrix(const Dataset& d, const std::vector<std::string>& cols) {
  if (d.rows() < 3) throw Error(ErrorCode::Argument, "correlation matrix needs n >= 3");
  std::set<std::string_view> seen;
  for (const auto& c : cols) {
    d.column(c);
    if (!seen.insert(c).second) throw Error(ErrorCode::Argument, "column '" + c + "' listed twice");
    if (column_stats(d, c).variance <= 0.0) {
      throw Error(ErrorCode::DegenerateColumn, "column '" + c + "' has zero variance");
    }
  }
  const auto k = static_cast<Eigen::Index>(cols.size());
  CorrelationReport rep;
  rep.names = cols;
  rep.n = d.rows();
  rep.r = Eigen::MatrixXd::Identity(k, k);
  rep.p = Eigen::MatrixXd::Ones(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double r = pearson_r(d.column(cols[i]), d.column(cols[j]));
      const double p = pearson_p_value(r, rep.n);
      rep.r(i, j) = rep.r(j, i) = r;
      rep.p(i, j) = rep.p(j, i) = p;
    }
  }
  return rep;
}

}  // namespace condreg
