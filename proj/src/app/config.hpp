#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace condreg::app {

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "CONDREG_CONFIG";

/// Settings shared by the subcommands. Precedence: command-line flags, then
/// the config file, then these defaults.
///
/// Config file keys (JSON object, all optional):
///   alpha                  significance level, (0, 1)
///   level                  ellipse coverage level, (0, 1)
///   correlation_threshold  |r| above which predictors count as strongly correlated
///   control_tolerance      antagonism tolerance, fraction of response range
///   delimiter              one-character CSV delimiter
///   strict_hierarchy       hierarchy violations become errors
///   threads                worker threads for subset search (0 = auto)
struct Config {
  double alpha = 0.05;
  double level = 0.95;
  double correlation_threshold = 0.7;
  double control_tolerance = 0.05;
  char delimiter = ',';
  bool strict_hierarchy = false;
  unsigned threads = 0;
};

/// Reads `path`, or the file named by CONDREG_CONFIG when `path` is empty.
/// No file at all yields the defaults. Unknown keys or bad values raise
/// Error(Argument); an unreadable file raises Error(Io).
Config load_config(const std::optional<std::filesystem::path>& path);

}  // namespace condreg::app
