#include "mecsim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "mecsim/errors.hpp"

namespace mecsim
{

using nlohmann::json;

namespace
{

class ObjectReader
{
public:
  ObjectReader (const json &obj, std::string path) : obj_ (obj), path_ (std::move (path))
  {
    if (!obj_.is_object ())
      throw ConfigError (label () + ": expected an object");
  }

  std::string key_path (const std::string &key) const
  {
    return path_.empty () ? key : path_ + "." + key;
  }

  const json *find (const std::string &key)
  {
    const auto it = obj_.find (key);
    if (it == obj_.end ())
      return nullptr;
    seen_.insert (key);
    return &*it;
  }

  void number (const std::string &key, double &out)
  {
    if (const json *v = find (key))
      {
        if (!v->is_number ())
          throw ConfigError (key_path (key) + ": expected a number");
        out = v->get<double> ();
      }
  }

  template <typename Int>
  void count (const std::string &key, Int &out)
  {
    if (const json *v = find (key))
      {
        if (!(v->is_number_unsigned ()
              || (v->is_number_integer () && v->get<std::int64_t> () >= 0)))
          throw ConfigError (key_path (key) + ": expected a non-negative integer");
        out = v->get<Int> ();
      }
  }

  void numbers (const std::string &key, std::vector<double> &out)
  {
    if (const json *v = find (key))
      {
        if (!v->is_array ())
          throw ConfigError (key_path (key) + ": expected an array of numbers");
        out.clear ();
        for (std::size_t i = 0; i < v->size (); ++i)
          {
            if (!(*v)[i].is_number ())
              throw ConfigError (key_path (key) + "[" + std::to_string (i)
                                 + "]: expected a number");
            out.push_back ((*v)[i].get<double> ());
          }
      }
  }

  void string (const std::string &key, std::string &out)
  {
    if (const json *v = find (key))
      {
        if (!v->is_string ())
          throw ConfigError (key_path (key) + ": expected a string");
        out = v->get<std::string> ();
      }
  }

  void finish () const
  {
    for (const auto &item : obj_.items ())
      if (!seen_.count (item.key ()))
        throw ConfigError (key_path (item.key ()) + ": unknown key");
  }

private:
  std::string label () const { return path_.empty () ? "config" : path_; }

  const json &obj_;
  std::string path_;
  std::set<std::string> seen_;
};

InterferenceModel
parse_interference (const std::string &s, const std::string &key)
{
  if (s == "all_out_of_cell")
    return InterferenceModel::AllOutOfCell;
  if (s == "one_per_cell")
    return InterferenceModel::OnePerCell;
  throw ConfigError (key + ": expected all_out_of_cell or one_per_cell, got '" + s + "'");
}

std::string
interference_name (InterferenceModel m)
{
  return m == InterferenceModel::AllOutOfCell ? "all_out_of_cell" : "one_per_cell";
}

LoadModel
parse_load (const std::string &s, const std::string &key)
{
  if (s == "analytical_mean")
    return LoadModel::AnalyticalMean;
  if (s == "realized_count")
    return LoadModel::RealizedCount;
  throw ConfigError (key + ": expected analytical_mean or realized_count, got '" + s + "'");
}

std::string
load_name (LoadModel m)
{
  return m == LoadModel::AnalyticalMean ? "analytical_mean" : "realized_count";
}

NamedRule
parse_rule (const json &j, const std::string &path)
{
  if (j.is_string ())
    {
      const auto s = j.get<std::string> ();
      if (s == "rsrp")
        return {"rsrp", RuleKind::Rsrp, {}};
      if (s == "mec")
        return {"mec", RuleKind::Mec, {}};
      throw ConfigError (path + ": expected rsrp, mec or a custom rule object, got '" + s + "'");
    }
  ObjectReader r (j, path);
  NamedRule rule;
  rule.kind = RuleKind::Custom;
  r.string ("name", rule.name);
  r.numbers ("bias", rule.custom_bias);
  r.finish ();
  if (rule.name.empty ())
    throw ConfigError (path + ".name: custom rules need a name");
  return rule;
}

json
rule_to_json (const NamedRule &rule)
{
  switch (rule.kind)
    {
    case RuleKind::Rsrp:
      return "rsrp";
    case RuleKind::Mec:
      return "mec";
    case RuleKind::Custom:
      break;
    }
  return json{{"name", rule.name}, {"bias", rule.custom_bias}};
}

} // namespace

ProjectConfig
default_project_config ()
{
  ProjectConfig cfg;
  cfg.experiment = baseline_config ();
  cfg.omegas = {0.5, 2.0};
  for (int r = 2; r <= 16; ++r)
    cfg.density_ratios.push_back (r);
  cfg.density_sweep_omega = 2.0;
  cfg.omega_grid = {0.01, 0.02, 0.03, 0.05, 1.0, 20.0, 40.0, 50.0, 80.0};
  cfg.coverage_resolution = 256;
  return cfg;
}

ProjectConfig
parse_config (const json &doc)
{
  ProjectConfig cfg = default_project_config ();
  ExperimentConfig &ex = cfg.experiment;
  ObjectReader root (doc, "");

  if (const json *net = root.find ("network"))
    {
      ObjectReader r (*net, "network");
      if (const json *tiers = r.find ("tiers"))
        {
          if (!tiers->is_array ())
            throw ConfigError ("network.tiers: expected an array");
          ex.network.tiers.clear ();
          for (std::size_t i = 0; i < tiers->size (); ++i)
            {
              ObjectReader t ((*tiers)[i], "network.tiers[" + std::to_string (i) + "]");
              TierConfig tier;
              tier.tx_power_dbm = std::numeric_limits<double>::quiet_NaN ();
              tier.mec_capacity = tier.enb_density = tier.bandwidth_hz
                  = std::numeric_limits<double>::quiet_NaN ();
              t.number ("tx_power_dbm", tier.tx_power_dbm);
              t.number ("mec_capacity", tier.mec_capacity);
              t.number ("enb_density", tier.enb_density);
              t.number ("bandwidth_hz", tier.bandwidth_hz);
              t.finish ();
              ex.network.tiers.push_back (tier);
            }
        }
      r.number ("ue_density", ex.network.ue_density);
      r.number ("window_area_km2", ex.network.window_area_km2);
      r.finish ();
    }
  if (const json *ch = root.find ("channel"))
    {
      ObjectReader r (*ch, "channel");
      r.number ("pathloss_exponent", ex.channel.pathloss_exponent);
      r.number ("ue_tx_power_dbm", ex.channel.ue_tx_power_dbm);
      r.number ("noise_power_dbm", ex.channel.noise_power_dbm);
      r.finish ();
    }
  if (const json *task = root.find ("task"))
    {
      ObjectReader r (*task, "task");
      r.number ("packet_bits_min", ex.tasks.packet_bits_min);
      r.number ("packet_bits_max", ex.tasks.packet_bits_max);
      r.number ("cycles_per_bit_min", ex.tasks.cycles_per_bit_min);
      r.number ("cycles_per_bit_max", ex.tasks.cycles_per_bit_max);
      r.finish ();
    }
  if (const json *rules = root.find ("rules"))
    {
      if (!rules->is_array ())
        throw ConfigError ("rules: expected an array");
      ex.rules.clear ();
      for (std::size_t i = 0; i < rules->size (); ++i)
        ex.rules.push_back (parse_rule ((*rules)[i], "rules[" + std::to_string (i) + "]"));
    }
  root.count ("realizations", ex.realizations);
  root.count ("master_seed", ex.master_seed);
  root.number ("epdb_threshold_s", ex.epdb_threshold_s);
  {
    std::string s = interference_name (ex.interference_model);
    root.string ("interference_model", s);
    ex.interference_model = parse_interference (s, "interference_model");
  }
  {
    std::string s = load_name (ex.load_model);
    root.string ("load_model", s);
    ex.load_model = parse_load (s, "load_model");
  }
  if (const json *grid = root.find ("ccdf_grid"))
    {
      ObjectReader r (*grid, "ccdf_grid");
      r.number ("min_s", ex.ccdf_grid.min_s);
      r.number ("max_s", ex.ccdf_grid.max_s);
      r.count ("points", ex.ccdf_grid.points);
      r.finish ();
    }
  root.numbers ("omegas", cfg.omegas);
  root.numbers ("density_ratios", cfg.density_ratios);
  root.number ("density_sweep_omega", cfg.density_sweep_omega);
  root.numbers ("omega_grid", cfg.omega_grid);
  root.count ("coverage_resolution", cfg.coverage_resolution);
  root.finish ();

  ex.validate ();
  for (double w : cfg.omegas)
    if (!(std::isfinite (w) && w > 0))
      throw ConfigError ("omegas: every value must be > 0");
  for (double w : cfg.omega_grid)
    if (!(std::isfinite (w) && w > 0))
      throw ConfigError ("omega_grid: every value must be > 0");
  for (double r : cfg.density_ratios)
    if (!(std::isfinite (r) && r > 0))
      throw ConfigError ("density_ratios: every value must be > 0");
  if (cfg.coverage_resolution < 2)
    throw ConfigError ("coverage_resolution: must be >= 2");
  return cfg;
}

json
to_json (const ProjectConfig &cfg)
{
  const ExperimentConfig &ex = cfg.experiment;
  json tiers = json::array ();
  for (const auto &t : ex.network.tiers)
    tiers.push_back ({{"tx_power_dbm", t.tx_power_dbm},
                      {"mec_capacity", t.mec_capacity},
                      {"enb_density", t.enb_density},
                      {"bandwidth_hz", t.bandwidth_hz}});
  json rules = json::array ();
  for (const auto &r : ex.rules)
    rules.push_back (rule_to_json (r));
  return json{
      {"network",
       {{"tiers", tiers},
        {"ue_density", ex.network.ue_density},
        {"window_area_km2", ex.network.window_area_km2}}},
      {"channel",
       {{"pathloss_exponent", ex.channel.pathloss_exponent},
        {"ue_tx_power_dbm", ex.channel.ue_tx_power_dbm},
        {"noise_power_dbm", ex.channel.noise_power_dbm}}},
      {"task",
       {{"packet_bits_min", ex.tasks.packet_bits_min},
        {"packet_bits_max", ex.tasks.packet_bits_max},
        {"cycles_per_bit_min", ex.tasks.cycles_per_bit_min},
        {"cycles_per_bit_max", ex.tasks.cycles_per_bit_max}}},
      {"rules", rules},
      {"realizations", ex.realizations},
      {"master_seed", ex.master_seed},
      {"epdb_threshold_s", ex.epdb_threshold_s},
      {"interference_model", interference_name (ex.interference_model)},
      {"load_model", load_name (ex.load_model)},
      {"ccdf_grid",
       {{"min_s", ex.ccdf_grid.min_s},
        {"max_s", ex.ccdf_grid.max_s},
        {"points", ex.ccdf_grid.points}}},
      {"omegas", cfg.omegas},
      {"density_ratios", cfg.density_ratios},
      {"density_sweep_omega", cfg.density_sweep_omega},
      {"omega_grid", cfg.omega_grid},
      {"coverage_resolution", cfg.coverage_resolution},
  };
}

json
read_config_document (const std::filesystem::path &path)
{
  std::ifstream in (path);
  if (!in)
    throw ConfigError ("cannot read config file " + path.string ());
  json doc;
  try
    {
      doc = json::parse (in, nullptr, true, true);
    }
  catch (const json::parse_error &e)
    {
      throw ConfigError (path.string () + ": " + e.what ());
    }
  if (doc.is_object () && doc.contains ("resolved_config"))
    return doc["resolved_config"];
  return doc;
}

void
apply_override (json &doc, std::string_view assignment)
{
  const auto eq = assignment.find ('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError ("override '" + std::string (assignment) + "': expected key=value");
  const std::string key (assignment.substr (0, eq));
  const std::string text (assignment.substr (eq + 1));

  json value;
  try
    {
      value = json::parse (text);
    }
  catch (const json::parse_error &)
    {
      value = text;
    }

  std::string pointer;
  std::stringstream parts (key);
  std::string part;
  while (std::getline (parts, part, '.'))
    {
      // tiers[1] -> tiers/1
      const auto bracket = part.find ('[');
      if (bracket != std::string::npos && part.back () == ']')
        pointer += "/" + part.substr (0, bracket) + "/"
                   + part.substr (bracket + 1, part.size () - bracket - 2);
      else
        pointer += "/" + part;
    }
  try
    {
      doc[json::json_pointer (pointer)] = value;
    }
  catch (const json::exception &e)
    {
      throw ConfigError ("override '" + key + "': " + e.what ());
    }
}

std::string
sha256_hex (std::string_view data)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest (data.data (), data.size (), digest, &len, EVP_sha256 (), nullptr) != 1)
    throw std::runtime_error ("sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i)
    out << std::hex << std::setw (2) << std::setfill ('0') << static_cast<int> (digest[i]);
  return out.str ();
}

json
make_manifest (const ProjectConfig &cfg, const ManifestInfo &info)
{
  return json{
      {"tool", "mecsim"},
      {"tool_version", info.tool_version},
      {"command", info.command},
      {"status", info.status},
      {"master_seed", cfg.experiment.master_seed},
      {"input_config_sha256", info.input_digest},
      {"started_utc", info.started_utc},
      {"wall_clock_s", info.wall_clock_s},
      {"threads", info.threads},
      {"outputs", info.outputs},
      {"resolved_config", to_json (cfg)},
  };
}

} // namespace mecsim
