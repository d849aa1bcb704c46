#include "mecsim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mecsim/csv.hpp"
#include "mecsim/errors.hpp"

namespace mecsim
{

AssociationRule
NamedRule::resolve (std::span<const TierConfig> tiers) const
{
  switch (kind)
    {
    case RuleKind::Rsrp:
      return rsrp_rule (tiers);
    case RuleKind::Mec:
      return mec_rule (tiers);
    case RuleKind::Custom:
      return AssociationRule{custom_bias};
    }
  throw std::logic_error ("NamedRule::resolve: unknown kind");
}

void
ExperimentConfig::validate () const
{
  network.validate ();
  try
    {
      channel.validate ();
    }
  catch (const std::invalid_argument &e)
    {
      throw ConfigError (e.what ());
    }
  tasks.validate ();
  ccdf_grid.validate ();
  if (rules.empty ())
    throw ConfigError ("rules: at least one association rule is required");
  for (const auto &r : rules)
    {
      try
        {
          r.resolve (network.tiers).validate (network.tier_count ());
        }
      catch (const std::invalid_argument &e)
        {
          throw ConfigError ("rules[" + r.name + "]: " + e.what ());
        }
    }
  if (realizations < 1)
    throw ConfigError ("realizations must be >= 1");
  if (!(std::isfinite (epdb_threshold_s) && epdb_threshold_s >= 0))
    throw ConfigError ("epdb_threshold_s must be finite and >= 0");
}

ExperimentConfig
baseline_config ()
{
  ExperimentConfig cfg;
  const double c2 = 10e9;
  cfg.network.tiers = {
      {46.0, 0.0, 0.5, 10e6},
      {30.0, c2, 3.0, 10e6},
  };
  cfg.network.ue_density = 30.0;
  cfg.network.window_area_km2 = 10.0;
  cfg.network.tiers[0].mec_capacity = c2 * disparity_profile (cfg.network.tiers).rho[0] / 2.0;
  cfg.channel = {4.0, 23.0, -90.0};
  cfg.rules = {{"rsrp", RuleKind::Rsrp, {}}, {"mec", RuleKind::Mec, {}}};
  cfg.tasks = {100e3, 300e3, 500.0, 1500.0};
  cfg.realizations = 10000;
  cfg.master_seed = 1;
  cfg.epdb_threshold_s = 0.4;
  return cfg;
}

RealizationResult
run_realization (const ExperimentConfig &cfg, std::size_t index)
{
  if (index >= cfg.realizations)
    throw std::out_of_range ("run_realization: index beyond configured realizations");

  RealizationResult out;
  out.index = index;
  StreamKey key{cfg.master_seed, index, StreamTag::Deployment, 0, 0};
  auto sampled = sample_nonempty_deployment (cfg.network, key);
  out.deployment = std::move (sampled.deployment);
  out.resampled = sampled.resampled;
  const auto &dep = out.deployment;
  const std::size_t ue_count = dep.ues.size ();

  key.tag = StreamTag::Tasks;
  Rng task_rng = make_stream (key);
  out.tasks.reserve (ue_count);
  for (std::size_t k = 0; k < ue_count; ++k)
    out.tasks.push_back (sample_task (cfg.tasks, task_rng));

  key.tag = StreamTag::Fading;
  Rng fading_rng = make_stream (key);
  const auto fading = FadingRealization::sample (ue_count, dep.enb_count (), fading_rng);
  const auto table = ReceivedPowerTable::build (dep, fading, cfg.channel);
  const double noise_w = dbm_to_watts (cfg.channel.noise_power_dbm);
  const double alpha = cfg.channel.pathloss_exponent;

  out.rules.reserve (cfg.rules.size ());
  for (std::size_t r = 0; r < cfg.rules.size (); ++r)
    {
      const auto rule = cfg.rules[r].resolve (cfg.network.tiers);
      RuleRealization rr;
      rr.association = associate (dep, rule, alpha);
      rr.tier_counts = rr.association.tier_counts (dep.tier_count ());

      key.tag = StreamTag::Scheduling;
      key.sub = r;
      Rng sched_rng = make_stream (key);
      key.sub = 0;
      const auto transmitters
          = select_transmitters (rr.association, cfg.interference_model, sched_rng);
      const auto sinr = uplink_sinr_all (rr.association, table, noise_w, transmitters);

      const auto stats = analytical_stats (cfg.network, rule, alpha);
      rr.ues.reserve (ue_count);
      for (std::size_t k = 0; k < ue_count; ++k)
        {
          const EnbRef serving = rr.association.serving[k];
          const ResourceShare share
              = cfg.load_model == LoadModel::AnalyticalMean
                    ? resource_share (serving.tier, stats, cfg.network)
                    : realized_resource_share (
                        serving.tier, rr.association.load[rr.association.serving_flat[k]],
                        cfg.network);
          rr.ues.push_back ({k, serving, sinr[k].sinr,
                             compute_latency (out.tasks[k], share, sinr[k].sinr,
                                              cfg.network.tiers[serving.tier].mec_capacity)});
        }
      out.rules.push_back (std::move (rr));
    }
  if (out.rules.size () >= 2)
    out.non_cohesive = count_non_cohesive (out.rules[0].association, out.rules[1].association);
  return out;
}

namespace
{

struct CompactRealization
{
  std::vector<std::vector<double>> epdb; // per rule
  std::vector<std::vector<std::size_t>> tier_counts;
  std::size_t ue_count = 0;
  std::size_t non_cohesive = 0;
  std::size_t resampled = 0;
};

CompactRealization
compact (RealizationResult r)
{
  CompactRealization c;
  c.ue_count = r.deployment.ues.size ();
  c.non_cohesive = r.non_cohesive;
  c.resampled = r.resampled;
  for (auto &rule : r.rules)
    {
      std::vector<double> e;
      e.reserve (rule.ues.size ());
      for (const auto &u : rule.ues)
        e.push_back (u.latency.epdb_s);
      c.epdb.push_back (std::move (e));
      c.tier_counts.push_back (std::move (rule.tier_counts));
    }
  return c;
}

} // namespace

ExperimentResult
run_experiment (const ExperimentConfig &cfg, std::size_t threads)
{
  cfg.validate ();
  const std::size_t n = cfg.realizations;
  std::vector<CompactRealization> slots (n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true)
      {
        const std::size_t i = next.fetch_add (1);
        if (i >= n)
          return;
        try
          {
            slots[i] = compact (run_realization (cfg, i));
          }
        catch (...)
          {
            std::lock_guard lock (failure_mutex);
            if (!failure)
              failure = std::current_exception ();
            next.store (n);
            return;
          }
      }
  };

  const std::size_t workers = std::clamp<std::size_t> (threads, 1, n);
  if (workers == 1)
    worker ();
  else
    {
      std::vector<std::jthread> pool;
      pool.reserve (workers);
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back (worker);
    }
  if (failure)
    std::rethrow_exception (failure);

  // Ordered reduction by realization index.
  ExperimentResult result;
  result.realizations = n;
  result.rules.resize (cfg.rules.size ());
  for (auto &r : result.rules)
    r.tier_counts.assign (cfg.network.tier_count (), 0);
  for (auto &slot : slots)
    {
      result.ue_count += slot.ue_count;
      result.non_cohesive += slot.non_cohesive;
      result.resampled += slot.resampled;
      for (std::size_t r = 0; r < cfg.rules.size (); ++r)
        {
          auto &dst = result.rules[r];
          dst.epdb_s.insert (dst.epdb_s.end (), slot.epdb[r].begin (), slot.epdb[r].end ());
          for (std::size_t t = 0; t < dst.tier_counts.size (); ++t)
            dst.tier_counts[t] += slot.tier_counts[r][t];
        }
      slot = {};
    }
  return result;
}

std::vector<RunStatistics>
summarize (const ExperimentConfig &cfg, ExperimentResult result)
{
  const auto grid = cfg.ccdf_grid.values ();
  const Proportion non_cohesive = wilson_interval (result.non_cohesive, result.ue_count);
  std::vector<RunStatistics> out;
  for (std::size_t r = 0; r < result.rules.size (); ++r)
    {
      auto &samples = result.rules[r];
      RunStatistics s;
      s.rule = cfg.rules[r].name;
      s.epdb = aggregate (std::move (samples.epdb_s), cfg.epdb_threshold_s, grid);
      for (std::size_t count : samples.tier_counts)
        s.assoc_fraction.push_back (result.ue_count == 0
                                        ? 0.0
                                        : static_cast<double> (count)
                                              / static_cast<double> (result.ue_count));
      s.non_cohesive = non_cohesive;
      s.realizations = result.realizations;
      s.resampled = result.resampled;
      out.push_back (std::move (s));
    }
  return out;
}

ExperimentConfig
with_density_ratio (ExperimentConfig cfg, double ratio)
{
  if (cfg.network.tier_count () < 2)
    throw ConfigError ("density-ratio sweep needs at least two tiers");
  if (!(std::isfinite (ratio) && ratio > 0))
    throw ConfigError ("density ratio must be > 0");
  cfg.network.tiers[1].enb_density = ratio * cfg.network.tiers[0].enb_density;
  return cfg;
}

ExperimentConfig
with_omega (ExperimentConfig cfg, double omega)
{
  if (cfg.network.tier_count () < 2)
    throw ConfigError ("omega sweep needs at least two tiers");
  if (!(std::isfinite (omega) && omega > 0))
    throw ConfigError ("omega must be > 0");
  const double rho = disparity_profile (cfg.network.tiers).rho[0];
  cfg.network.tiers[0].mec_capacity = cfg.network.tiers[1].mec_capacity * rho / omega;
  return cfg;
}

ExperimentConfig
with_lowest_tier_capacity (ExperimentConfig cfg, double capacity)
{
  if (!(std::isfinite (capacity) && capacity > 0))
    throw ConfigError ("MEC capacity must be > 0");
  const double scale = capacity / cfg.network.tiers.back ().mec_capacity;
  for (auto &t : cfg.network.tiers)
    t.mec_capacity *= scale;
  cfg.network.tiers.back ().mec_capacity = capacity;
  return cfg;
}

std::vector<SweepPoint>
sweep (const ExperimentConfig &cfg, SweepAxis axis, std::span<const double> values,
       std::size_t threads)
{
  std::vector<SweepPoint> out;
  if (axis == SweepAxis::Threshold)
    {
      // The samples do not depend on the threshold: run once, re-aggregate.
      const auto result = run_experiment (cfg, threads);
      for (double t : values)
        {
          ExperimentConfig point = cfg;
          point.epdb_threshold_s = t;
          point.validate ();
          out.push_back ({t, summarize (point, result)});
        }
      return out;
    }
  for (double v : values)
    {
      const ExperimentConfig point
          = axis == SweepAxis::DensityRatio ? with_density_ratio (cfg, v) : with_omega (cfg, v);
      out.push_back ({v, summarize (point, run_experiment (point, threads))});
    }
  return out;
}

CalibrationResult
calibrate_lowest_tier_capacity (const ExperimentConfig &cfg, std::span<const double> targets,
                                std::span<const double> candidates, std::size_t threads)
{
  if (targets.size () != cfg.rules.size ())
    throw std::invalid_argument ("calibrate: need one violation target per rule");
  if (candidates.empty ())
    throw std::invalid_argument ("calibrate: no candidate capacities");
  CalibrationResult out;
  out.cost = std::numeric_limits<double>::infinity ();
  for (double c : candidates)
    {
      const auto point = with_lowest_tier_capacity (cfg, c);
      const auto stats = summarize (point, run_experiment (point, threads));
      std::vector<double> v;
      double cost = 0.0;
      for (std::size_t r = 0; r < stats.size (); ++r)
        {
          v.push_back (stats[r].epdb.violation.value);
          cost += (v.back () - targets[r]) * (v.back () - targets[r]);
        }
      out.candidates.push_back (c);
      out.violation.push_back (std::move (v));
      if (cost < out.cost)
        {
          out.cost = cost;
          out.capacity = c;
        }
    }
  return out;
}

std::vector<std::string>
statistics_csv_header (std::size_t tier_count)
{
  std::vector<std::string> h{"rule",   "axis_value", "threshold_s", "ccdf",
                             "violation_prob", "ci_lo", "ci_hi", "p50_epdb_s"};
  for (std::size_t t = 0; t < tier_count; ++t)
    h.push_back ("assoc_frac_tier" + std::to_string (t + 1));
  h.insert (h.end (), {"non_cohesive", "outages", "realizations"});
  return h;
}

void
write_statistics_csv (std::ostream &out, std::span<const SweepPoint> points,
                      std::size_t tier_count, bool ccdf_rows)
{
  using csv::format_double;
  out << csv::join_row (statistics_csv_header (tier_count)) << '\n';
  for (const auto &point : points)
    for (const auto &s : point.rules)
      {
        auto row = [&] (double threshold, double ccdf) {
          std::vector<std::string> f{s.rule,
                                     format_double (point.axis_value),
                                     format_double (threshold),
                                     format_double (ccdf),
                                     format_double (s.epdb.violation.value),
                                     format_double (s.epdb.violation.ci_lo),
                                     format_double (s.epdb.violation.ci_hi),
                                     format_double (s.epdb.p50 ())};
          for (std::size_t t = 0; t < tier_count; ++t)
            f.push_back (format_double (t < s.assoc_fraction.size () ? s.assoc_fraction[t] : 0.0));
          f.push_back (format_double (s.non_cohesive.value));
          f.push_back (csv::format_int (static_cast<std::int64_t> (s.epdb.outage_count)));
          f.push_back (csv::format_int (static_cast<std::int64_t> (s.realizations)));
          out << csv::join_row (f) << '\n';
        };
        if (ccdf_rows)
          for (const auto &c : s.epdb.ccdf)
            row (c.threshold_s, c.probability);
        else
          row (s.epdb.threshold_s, s.epdb.violation.value);
      }
}

} // namespace mecsim
