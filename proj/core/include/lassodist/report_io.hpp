#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "lassodist/harness.hpp"

namespace lassodist {

/// Parses an experiment config. Unknown keys and wrong types raise ConfigError.
///
/// "x" is either a dense array of length N or a list of {"index", "value"}
/// objects with 1-based indices.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved config (defaults filled in). The worker count is omitted
/// because it never affects results.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Report document. Wall-clock time is deliberately left out so identical
/// runs produce identical bytes; see write_report for where it goes.
nlohmann::json report_to_json(const ExperimentReport& report,
                              const nlohmann::json& overrides = nlohmann::json::object());

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double v);

/// Writes report.json, hist_<k>.csv, cf_grid.csv, timing.json and, when the
/// config asks for it, samples_<k>.csv into `dir` (created if missing).
void write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                  const nlohmann::json& overrides = nlohmann::json::object());

}  // namespace lassodist
