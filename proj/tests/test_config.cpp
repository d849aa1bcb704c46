#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "mecsim/config.hpp"
#include "mecsim/errors.hpp"

using namespace mecsim;
using nlohmann::json;

namespace
{

bool
same (const ProjectConfig &a, const ProjectConfig &b)
{
  return to_json (a) == to_json (b);
}

std::string
config_error (const json &doc)
{
  try
    {
      (void) parse_config (doc);
    }
  catch (const ConfigError &e)
    {
      return e.what ();
    }
  return {};
}

} // namespace

TEST_SUITE ("config")
{
  TEST_CASE ("defaults round trip through json")
  {
    const auto def = default_project_config ();
    CHECK (same (parse_config (to_json (def)), def));
    CHECK (same (parse_config (json::object ()), def));
  }

  TEST_CASE ("shipped baseline file equals the built-in defaults")
  {
    const auto doc = read_config_document (std::filesystem::path (MECSIM_SOURCE_DIR)
                                           / "configs" / "baseline.json");
    CHECK (same (parse_config (doc), default_project_config ()));
  }

  TEST_CASE ("partial documents keep defaults")
  {
    const auto cfg = parse_config (json::parse (R"({"realizations": 7, "channel": {"pathloss_exponent": 3.5}})"));
    CHECK (cfg.experiment.realizations == 7);
    CHECK (cfg.experiment.channel.pathloss_exponent == 3.5);
    CHECK (cfg.experiment.channel.noise_power_dbm == -90.0);
  }

  TEST_CASE ("unknown keys are rejected with their path")
  {
    CHECK (config_error (json::parse (R"({"realisations": 5})")).find ("realisations")
           != std::string::npos);
    CHECK (config_error (json::parse (R"({"channel": {"alpha": 4}})")).find ("channel.alpha")
           != std::string::npos);
  }

  TEST_CASE ("wrong types and invalid values are rejected")
  {
    CHECK_FALSE (config_error (json::parse (R"({"realizations": "many"})")).empty ());
    CHECK_FALSE (config_error (json::parse (R"({"realizations": -3})")).empty ());
    CHECK_FALSE (config_error (json::parse (R"({"realizations": 0})")).empty ());
    CHECK_FALSE (config_error (json::parse (R"({"interference_model": "some"})")).empty ());
    CHECK_FALSE (config_error (json::parse (R"({"rules": ["maxsinr"]})")).empty ());
    CHECK_FALSE (config_error (json::parse (R"({"omega_grid": [1, -2]})")).empty ());
    CHECK_FALSE (config_error (json::parse (R"({"network": {"tiers": [{"tx_power_dbm": 46}]}})")).empty ());
    CHECK_FALSE (config_error (json::parse (R"([1, 2])")).empty ());
  }

  TEST_CASE ("models and custom rules parse")
  {
    const auto cfg = parse_config (json::parse (R"({
      "interference_model": "one_per_cell",
      "load_model": "realized_count",
      "rules": ["mec", {"name": "flat", "bias": [1, 1]}]
    })"));
    CHECK (cfg.experiment.interference_model == InterferenceModel::OnePerCell);
    CHECK (cfg.experiment.load_model == LoadModel::RealizedCount);
    REQUIRE (cfg.experiment.rules.size () == 2);
    CHECK (cfg.experiment.rules[0].kind == RuleKind::Mec);
    CHECK (cfg.experiment.rules[1].kind == RuleKind::Custom);
    CHECK (cfg.experiment.rules[1].custom_bias == std::vector<double>{1, 1});
  }

  TEST_CASE ("overrides")
  {
    auto doc = to_json (default_project_config ());
    apply_override (doc, "network.tiers[1].mec_capacity=2e10");
    apply_override (doc, "master_seed=99");
    apply_override (doc, "load_model=realized_count");
    apply_override (doc, "omegas=[0.5]");
    const auto cfg = parse_config (doc);
    CHECK (cfg.experiment.network.tiers[1].mec_capacity == 2e10);
    CHECK (cfg.experiment.master_seed == 99);
    CHECK (cfg.experiment.load_model == LoadModel::RealizedCount);
    CHECK (cfg.omegas == std::vector<double>{0.5});
    CHECK_THROWS_AS (apply_override (doc, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS (apply_override (doc, "=3"), ConfigError);
  }

  TEST_CASE ("manifest carries a re-runnable config")
  {
    auto cfg = default_project_config ();
    cfg.experiment.master_seed = 1234;
    ManifestInfo info;
    info.command = "simulate";
    info.tool_version = "test";
    info.input_digest = sha256_hex ("");
    info.outputs = {"a.csv"};
    const auto m = make_manifest (cfg, info);
    CHECK (m.at ("master_seed") == 1234);
    CHECK (m.at ("status") == "ok");

    const auto path = std::filesystem::temp_directory_path () / "mecsim_test_manifest.json";
    std::ofstream (path) << m.dump (2);
    CHECK (same (parse_config (read_config_document (path)), cfg));
    std::filesystem::remove (path);
  }

  TEST_CASE ("sha256")
  {
    CHECK (sha256_hex ("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK (sha256_hex ("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE ("missing files are config errors")
  {
    CHECK_THROWS_AS (read_config_document ("/nonexistent/mecsim.json"), ConfigError);
  }
}
