#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mecsim/montecarlo.hpp"

namespace mecsim
{

// Everything a CLI run needs: the experiment plus per-subcommand axes.
struct ProjectConfig
{
  ExperimentConfig experiment;
  std::vector<double> omegas;          // simulate; empty keeps capacities as given
  std::vector<double> density_ratios;  // sweep-density
  double density_sweep_omega = 2.0;    // omega held during sweep-density (<= 0: as given)
  std::vector<double> omega_grid;      // sweep-omega
  std::size_t coverage_resolution = 256;
};

// The shipped baseline profile (configs/baseline.json holds the same values).
ProjectConfig default_project_config ();

// Strict: unknown keys and wrong types raise ConfigError naming the key.
// Missing keys keep their defaults.
ProjectConfig parse_config (const nlohmann::json &doc);
nlohmann::json to_json (const ProjectConfig &cfg);

// Reads a config file or a run manifest (its "resolved_config").
nlohmann::json read_config_document (const std::filesystem::path &path);

// `dotted.key=value`; the value is parsed as JSON, or taken as a string.
void apply_override (nlohmann::json &doc, std::string_view assignment);

std::string sha256_hex (std::string_view data);

struct ManifestInfo
{
  std::string command;
  std::string tool_version;
  std::string input_digest;   // sha256 of the input document as given
  std::string started_utc;    // ISO 8601
  double wall_clock_s = 0.0;
  std::size_t threads = 1;
  std::vector<std::string> outputs;
  std::string status = "ok";
};

nlohmann::json make_manifest (const ProjectConfig &cfg, const ManifestInfo &info);

} // namespace mecsim
