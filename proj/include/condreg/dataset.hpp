#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace condreg {

struct Column {
  std::string name;
  std::vector<double> values;
};

/// Named numeric columns of equal length. Immutable once constructed:
/// every column has n >= 1 finite values and names are unique.
class Dataset {
 public:
  explicit Dataset(std::vector<Column> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::vector<std::string> names() const;

  bool has_column(std::string_view name) const noexcept;
  /// Throws Error(UnknownColumn).
  std::span<const double> column(std::string_view name) const;
  Eigen::Map<const Eigen::VectorXd> vector(std::string_view name) const;

  /// Copy with one more column appended (names must stay unique).
  Dataset with_column(Column column) const;
  /// Copy with rows reordered / subset by index.
  Dataset select_rows(std::span<const std::size_t> indices) const;

 private:
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
};

struct LoadResult {
  Dataset data;
  std::size_t dropped_rows = 0;
};

/// RFC-4180 style reader. Rows with an empty or non-numeric cell are dropped
/// and counted; structural problems raise Error(Parse) with the line number.
LoadResult load_csv(std::istream& in, const CsvOptions& options = {});
LoadResult load_csv_file(const std::filesystem::path& path, const CsvOptions& options = {});

/// Parses a single finite decimal number, accepting surrounding blanks.
bool parse_number(std::string_view text, double& out) noexcept;

// ---------------------------------------------------------------------------
// Descriptive statistics

struct ColumnStats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, divisor n-1; 0 when n == 1
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
  bool singleton = false;
};

ColumnStats column_stats(const Dataset& d, std::string_view col);

struct QuartileRow {
  std::string name;
  double min = 0.0;
  double q25 = 0.0;
  double mean = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

struct QuartileSummary {
  std::vector<QuartileRow> rows;
  /// Throws Error(UnknownColumn).
  const QuartileRow& at(std::string_view name) const;
};

/// Type-7 quantile (linear interpolation between order statistics).
double quantile(std::span<const double> values, double prob);
QuartileSummary quartiles(const Dataset& d);

struct CorrelationReport {
  std::vector<std::string> names;
  Eigen::MatrixXd r;  // symmetric, unit diagonal
  Eigen::MatrixXd p;  // two-sided, diagonal fixed at 1
  std::size_t n = 0;

  double r_between(std::string_view a, std::string_view b) const;
  std::size_t index_of(std::string_view name) const;
};

double pearson_r(std::span<const double> x, std::span<const double> y);
/// Two-sided p-value of H0: rho = 0 via t = r sqrt(n-2) / sqrt(1-r^2).
double pearson_p_value(double r, std::size_t n);
CorrelationReport pearson_matrix(const Dataset& d, const std::vector<std::string>& cols);

}  // namespace condreg
