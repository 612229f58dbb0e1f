#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "condreg/error.hpp"
#include "condreg/formula.hpp"

namespace condreg::app {

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double rounded = std::strtod(buf, nullptr);
  if (rounded == 0.0) return 0.0;  // drop negative zero
  return rounded;
}

Json report_header(std::string_view command) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  return j;
}

Json model_table(const FittedModel& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.coef.size(); ++i) {
    rows.push_back(Json{{"term", m.labels[static_cast<std::size_t>(i)]},
                        {"coef", number(m.coef(i))},
                        {"se", number(m.se(i))},
                        {"t", number(m.t(i))},
                        {"p", number(m.p(i))}});
  }
  return Json{{"formula", print_formula(m.spec)},
              {"response", m.spec.response},
              {"intercept", m.spec.intercept},
              {"table", rows}};
}

Json fit_stats(const FittedModel& m) {
  if (!m.from_data) return nullptr;
  return Json{{"r2", number(m.r2)},
              {"r2_adj", number(m.r2_adj)},
              {"rss", number(m.rss)},
              {"n", m.n},
              {"dof", m.dof}};
}

Json advisories_json(const std::vector<Advisory>& warnings) {
  Json out = Json::array();
  for (const auto& w : warnings) out.push_back(Json{{"kind", w.kind}, {"message", w.message}});
  return out;
}

std::string model_table_text(const FittedModel& m) {
  std::ostringstream os;
  os << print_formula(m.spec) << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %16s %16s %12s %12s\n", "term", "coef", "se", "t", "p");
  os << line;
  for (Eigen::Index i = 0; i < m.coef.size(); ++i) {
    std::snprintf(line, sizeof line, "%-20s %16s %16s %12s %12s\n",
                  m.labels[static_cast<std::size_t>(i)].c_str(), format_number(m.coef(i)).c_str(),
                  format_number(m.se(i)).c_str(), format_number(m.t(i)).c_str(),
                  format_number(m.p(i)).c_str());
    os << line;
  }
  if (m.from_data) {
    os << "n = " << m.n << ", dof = " << m.dof << ", R2 = " << format_number(m.r2)
       << ", adj R2 = " << format_number(m.r2_adj) << ", RSS = " << format_number(m.rss) << "\n";
  }
  return os.str();
}

std::string Tsv::render() const {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "\t" : "") + header[j];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "\t" : "") + format_number(row[j]);
    out += "\n";
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw Error(ErrorCode::Io, "failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot replace '" + path.string() + "'");
  }
}

}  // namespace condreg::app
