#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "condreg/ols.hpp"
#include "condreg/selection.hpp"

namespace condreg::app {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchema = "condreg/1";

/// Number rounded to 12 significant digits; null for NaN / infinity.
Json number(double v);
/// Fixed 12-significant-digit text used in TSV and text tables.
std::string format_number(double v);

Json report_header(std::string_view command);
Json model_table(const FittedModel& m);
Json fit_stats(const FittedModel& m);
Json advisories_json(const std::vector<Advisory>& warnings);

/// Plain-text rendering of a model table for --format text.
std::string model_table_text(const FittedModel& m);

struct Tsv {
  std::vector<std::string> comments;  // written as "# ..." lines
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string render() const;
};

/// Writes via a temporary sibling file and rename, so readers never observe
/// a partial file. Throws Error(Io).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace condreg::app
