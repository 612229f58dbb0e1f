#include "config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "condreg/error.hpp"

namespace condreg::app {
namespace {

double unit_interval(const nlohmann::json& v, const char* key) {
  if (!v.is_number()) throw Error(ErrorCode::Argument, std::string("config: '") + key + "' must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorCode::Argument, std::string("config: '") + key + "' must lie in (0, 1)");
  }
  return x;
}

}  // namespace

Config load_config(const std::optional<std::filesystem::path>& path) {
  std::filesystem::path file;
  if (path) {
    file = *path;
  } else if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
    file = env;
  } else {
    return {};
  }
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + file.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "config '" + file.string() + "': " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Argument, "config must be a JSON object");

  Config c;
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha") {
      c.alpha = unit_interval(value, "alpha");
    } else if (key == "level") {
      c.level = unit_interval(value, "level");
    } else if (key == "correlation_threshold") {
      c.correlation_threshold = unit_interval(value, "correlation_threshold");
    } else if (key == "control_tolerance") {
      c.control_tolerance = unit_interval(value, "control_tolerance");
    } else if (key == "delimiter") {
      if (!value.is_string() || value.get<std::string>().size() != 1) {
        throw Error(ErrorCode::Argument, "config: 'delimiter' must be a one-character string");
      }
      c.delimiter = value.get<std::string>().front();
    } else if (key == "strict_hierarchy") {
      if (!value.is_boolean()) throw Error(ErrorCode::Argument, "config: 'strict_hierarchy' must be boolean");
      c.strict_hierarchy = value.get<bool>();
    } else if (key == "threads") {
      if (!value.is_number_unsigned()) throw Error(ErrorCode::Argument, "config: 'threads' must be a non-negative integer");
      c.threads = value.get<unsigned>();
    } else {
      throw Error(ErrorCode::Argument, "config: unknown key '" + key + "'");
    }
  }
  return c;
}

}  // namespace condreg::app
