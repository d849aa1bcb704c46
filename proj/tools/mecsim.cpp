// mecsim: batch front end for the multi-tier MEC association simulator.
//
//   mecsim simulate       CCDF of the E-PDB per rule and omega
//   mecsim sweep-density  violation probability vs lambda_2 / lambda_1
//   mecsim sweep-omega    non-cohesive fraction vs omega
//   mecsim coverage-map   rasterized coverage regions of one realization
//   mecsim assoc-prob     analytical vs empirical tier association

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mecsim/config.hpp"
#include "mecsim/csv.hpp"
#include "mecsim/errors.hpp"
#include "mecsim/montecarlo.hpp"

#ifndef MECSIM_VERSION
#define MECSIM_VERSION "0.0.0"
#endif

namespace
{

using namespace mecsim;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions
{
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::size_t threads = std::max (1u, std::thread::hardware_concurrency ());
  std::string out;
};

void
add_common (CLI::App *cmd, CommonOptions &o, const std::string &default_out)
{
  o.out = default_out;
  cmd->add_option ("-c,--config", o.config_path,
                   "Config file or run manifest (default: $MECSIM_CONFIG, else built-in baseline)");
  cmd->add_option ("--set", o.overrides, "Override a config key: dotted.key=json_value");
  cmd->add_option ("--seed", o.seed, "Master seed");
  cmd->add_option ("--realizations", o.realizations, "Number of Monte Carlo realizations");
  cmd->add_option ("--threads", o.threads, "Worker threads (results do not depend on it)")
      ->check (CLI::PositiveNumber);
  cmd->add_option ("-o,--out", o.out, "Output path (CSV) or prefix (coverage-map)");
}

struct LoadedConfig
{
  ProjectConfig cfg;
  std::string digest;
};

LoadedConfig
load (const CommonOptions &o)
{
  std::string path = o.config_path;
  if (path.empty ())
    if (const char *env = std::getenv ("MECSIM_CONFIG"))
      path = env;

  json doc = path.empty () ? to_json (default_project_config ()) : read_config_document (path);
  for (const auto &ov : o.overrides)
    apply_override (doc, ov);
  if (o.seed)
    doc["master_seed"] = *o.seed;
  if (o.realizations)
    doc["realizations"] = *o.realizations;
  return {parse_config (doc), sha256_hex (doc.dump ())};
}

std::string
utc_now ()
{
  const std::time_t t = std::time (nullptr);
  std::tm tm{};
  gmtime_r (&t, &tm);
  char buf[32];
  std::strftime (buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void
write_text (const std::string &path, const std::string &text)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    throw std::runtime_error ("cannot write " + path);
  out << text;
}

// Runs `body`, then writes the manifest whether or not it succeeded.
int
run_with_manifest (const std::string &command, const CommonOptions &o,
                   const std::string &manifest_path,
                   const std::function<std::vector<std::string> (const ProjectConfig &)> &body)
{
  LoadedConfig loaded;
  try
    {
      loaded = load (o);
    }
  catch (const ConfigError &e)
    {
      std::cerr << "mecsim " << command << ": config error: " << e.what () << '\n';
      return kExitConfig;
    }

  ManifestInfo info;
  info.command = command;
  info.tool_version = MECSIM_VERSION;
  info.input_digest = loaded.digest;
  info.started_utc = utc_now ();
  info.threads = o.threads;
  const auto t0 = std::chrono::steady_clock::now ();
  int code = kExitOk;
  try
    {
      info.outputs = body (loaded.cfg);
    }
  catch (const ConfigError &e)
    {
      std::cerr << "mecsim " << command << ": config error: " << e.what () << '\n';
      info.status = std::string ("config error: ") + e.what ();
      code = kExitConfig;
    }
  catch (const std::exception &e)
    {
      std::cerr << "mecsim " << command << ": runtime error: " << e.what () << '\n';
      info.status = std::string ("runtime error: ") + e.what ();
      code = kExitRuntime;
    }
  info.wall_clock_s
      = std::chrono::duration<double> (std::chrono::steady_clock::now () - t0).count ();
  write_text (manifest_path, make_manifest (loaded.cfg, info).dump (2) + "\n");
  return code;
}

std::vector<std::string>
cmd_simulate (const ProjectConfig &cfg, const CommonOptions &o)
{
  std::vector<SweepPoint> points;
  if (cfg.omegas.empty ())
    {
      const double omega = cfg.experiment.network.tier_count () > 1
                               ? disparity_profile (cfg.experiment.network.tiers).omega[0]
                               : 1.0;
      points.push_back ({omega, summarize (cfg.experiment,
                                           run_experiment (cfg.experiment, o.threads))});
    }
  else
    points = sweep (cfg.experiment, SweepAxis::Omega, cfg.omegas, o.threads);
  std::ostringstream csv;
  write_statistics_csv (csv, points, cfg.experiment.network.tier_count (), true);
  write_text (o.out, csv.str ());
  return {o.out};
}

std::vector<std::string>
cmd_sweep_density (const ProjectConfig &cfg, const CommonOptions &o)
{
  ExperimentConfig base = cfg.experiment;
  if (cfg.density_sweep_omega > 0)
    base = with_omega (base, cfg.density_sweep_omega);
  const auto points = sweep (base, SweepAxis::DensityRatio, cfg.density_ratios, o.threads);
  std::ostringstream csv;
  write_statistics_csv (csv, points, base.network.tier_count (), false);
  write_text (o.out, csv.str ());
  return {o.out};
}

std::vector<std::string>
cmd_sweep_omega (const ProjectConfig &cfg, const CommonOptions &o)
{
  const auto points = sweep (cfg.experiment, SweepAxis::Omega, cfg.omega_grid, o.threads);
  std::ostringstream csv;
  write_statistics_csv (csv, points, cfg.experiment.network.tier_count (), false);
  write_text (o.out, csv.str ());
  return {o.out};
}

std::vector<std::string>
cmd_coverage_map (const ProjectConfig &cfg, const CommonOptions &o,
                  const std::vector<std::string> &rule_names)
{
  const ExperimentConfig &ex = cfg.experiment;
  std::vector<NamedRule> rules;
  if (rule_names.empty ())
    rules = ex.rules;
  else
    for (const auto &name : rule_names)
      {
        const auto it = std::find_if (ex.rules.begin (), ex.rules.end (),
                                      [&] (const NamedRule &r) { return r.name == name; });
        if (it == ex.rules.end ())
          throw ConfigError ("--rule: no configured rule named '" + name + "'");
        rules.push_back (*it);
      }

  const auto sampled = sample_nonempty_deployment (
      ex.network, {ex.master_seed, 0, StreamTag::Deployment, 0, 0});
  const auto &dep = sampled.deployment;
  const double alpha = ex.channel.pathloss_exponent;
  std::vector<std::string> outputs;

  std::ostringstream dep_csv;
  write_deployment_csv (dep_csv, dep);
  outputs.push_back (o.out + "_deployment.csv");
  write_text (outputs.back (), dep_csv.str ());

  std::ostringstream legend;
  write_coverage_legend (legend, dep);
  outputs.push_back (o.out + "_legend.csv");
  write_text (outputs.back (), legend.str ());

  std::vector<AssociationOutcome> outcomes;
  for (const auto &named : rules)
    {
      const auto rule = named.resolve (ex.network.tiers);
      std::ostringstream pgm;
      write_coverage_pgm (pgm, coverage_map (dep, rule, alpha, cfg.coverage_resolution));
      outputs.push_back (o.out + "_" + named.name + ".pgm");
      write_text (outputs.back (), pgm.str ());
      outcomes.push_back (associate (dep, rule, alpha));
    }

  std::ostringstream ues;
  std::vector<std::string> header{"ue", "x_km", "y_km"};
  for (const auto &named : rules)
    header.push_back ("enb_" + named.name);
  header.push_back ("non_cohesive");
  ues << csv::join_row (header) << '\n';
  for (std::size_t k = 0; k < dep.ues.size (); ++k)
    {
      std::vector<std::string> row{std::to_string (k), csv::format_double (dep.ues[k].x),
                                   csv::format_double (dep.ues[k].y)};
      bool differs = false;
      for (const auto &out : outcomes)
        {
          row.push_back (std::to_string (out.serving_flat[k]));
          differs = differs || out.serving_flat[k] != outcomes.front ().serving_flat[k];
        }
      row.push_back (differs ? "1" : "0");
      ues << csv::join_row (row) << '\n';
    }
  outputs.push_back (o.out + "_ues.csv");
  write_text (outputs.back (), ues.str ());
  return outputs;
}

std::vector<std::string>
cmd_assoc_prob (const ProjectConfig &cfg, const CommonOptions &o)
{
  const ExperimentConfig &ex = cfg.experiment;
  const auto stats = summarize (ex, run_experiment (ex, o.threads));
  const double alpha = ex.channel.pathloss_exponent;
  std::ostringstream csv;
  csv << "rule,tier,analytical,empirical,sigma,within_3sigma,ues,realizations\n";
  for (std::size_t r = 0; r < ex.rules.size (); ++r)
    {
      const auto analytical
          = analytical_stats (ex.network, ex.rules[r].resolve (ex.network.tiers), alpha);
      for (std::size_t t = 0; t < ex.network.tier_count (); ++t)
        {
          const double a = analytical.assoc_prob[t];
          const double sigma = std::sqrt (a * (1.0 - a) / static_cast<double> (ex.realizations));
          const double e = stats[r].assoc_fraction[t];
          csv << csv::join_row ({ex.rules[r].name, std::to_string (t + 1), csv::format_double (a),
                                 csv::format_double (e), csv::format_double (sigma),
                                 std::abs (e - a) <= 3.0 * sigma ? "1" : "0",
                                 std::to_string (stats[r].non_cohesive.trials),
                                 std::to_string (ex.realizations)})
              << '\n';
        }
    }
  write_text (o.out, csv.str ());
  return {o.out};
}

} // namespace

int
main (int argc, char **argv)
{
  CLI::App app{"Monte Carlo simulator for MEC-aware cell association in multi-tier networks"};
  app.set_version_flag ("--version", MECSIM_VERSION);
  app.require_subcommand (1);

  CommonOptions sim, dens, omeg, cov, assoc;
  std::vector<double> sim_omegas, dens_ratios, omega_values;
  std::optional<double> dens_omega, cov_omega, assoc_omega;
  std::optional<std::size_t> cov_resolution;
  std::vector<std::string> cov_rules;

  auto *s = app.add_subcommand ("simulate", "E-PDB CCDF per rule and omega");
  add_common (s, sim, "simulate.csv");
  s->add_option ("--omega", sim_omegas, "Omega values (replaces config 'omegas')");

  auto *d = app.add_subcommand ("sweep-density", "Violation probability vs density ratio");
  add_common (d, dens, "sweep_density.csv");
  d->add_option ("--ratio", dens_ratios, "lambda_2/lambda_1 values");
  d->add_option ("--omega", dens_omega, "Omega held during the sweep");

  auto *w = app.add_subcommand ("sweep-omega", "Non-cohesive fraction vs omega");
  add_common (w, omeg, "sweep_omega.csv");
  w->add_option ("--omega", omega_values, "Omega grid (replaces config 'omega_grid')");

  auto *m = app.add_subcommand ("coverage-map", "Coverage rasters of one realization");
  add_common (m, cov, "coverage");
  m->add_option ("--rule", cov_rules, "Rule name(s) to rasterize (default: all)");
  m->add_option ("--resolution", cov_resolution, "Pixels per side");
  m->add_option ("--omega", cov_omega, "Set C_1 from omega before rasterizing");

  auto *a = app.add_subcommand ("assoc-prob", "Analytical vs empirical association");
  add_common (a, assoc, "assoc_prob.csv");
  a->add_option ("--omega", assoc_omega, "Set C_1 from omega first");

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::ParseError &e)
    {
      const int code = app.exit (e);
      return code == 0 ? kExitOk : kExitConfig;
    }

  auto manifest = [] (const std::string &out) { return out + ".manifest.json"; };
  if (s->parsed ())
    {
      if (!sim_omegas.empty ())
        sim.overrides.push_back ("omegas=" + json (sim_omegas).dump ());
      return run_with_manifest ("simulate", sim, manifest (sim.out),
                                [&] (const ProjectConfig &c) { return cmd_simulate (c, sim); });
    }
  if (d->parsed ())
    {
      if (!dens_ratios.empty ())
        dens.overrides.push_back ("density_ratios=" + json (dens_ratios).dump ());
      if (dens_omega)
        dens.overrides.push_back ("density_sweep_omega=" + json (*dens_omega).dump ());
      return run_with_manifest ("sweep-density", dens, manifest (dens.out),
                                [&] (const ProjectConfig &c) { return cmd_sweep_density (c, dens); });
    }
  if (w->parsed ())
    {
      if (!omega_values.empty ())
        omeg.overrides.push_back ("omega_grid=" + json (omega_values).dump ());
      return run_with_manifest ("sweep-omega", omeg, manifest (omeg.out),
                                [&] (const ProjectConfig &c) { return cmd_sweep_omega (c, omeg); });
    }
  if (m->parsed ())
    {
      if (cov_resolution)
        cov.overrides.push_back ("coverage_resolution=" + std::to_string (*cov_resolution));
      return run_with_manifest ("coverage-map", cov, manifest (cov.out),
                                [&] (const ProjectConfig &c) {
                                  ProjectConfig local = c;
                                  if (cov_omega)
                                    local.experiment = with_omega (local.experiment, *cov_omega);
                                  return cmd_coverage_map (local, cov, cov_rules);
                                });
    }
  if (a->parsed ())
    return run_with_manifest ("assoc-prob", assoc, manifest (assoc.out),
                              [&] (const ProjectConfig &c) {
                                ProjectConfig local = c;
                                if (assoc_omega)
                                  local.experiment = with_omega (local.experiment, *assoc_omega);
                                return cmd_assoc_prob (local, assoc);
                              });
  return kExitConfig;
}
