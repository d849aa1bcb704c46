#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mecsim/association.hpp"
#include "mecsim/channel.hpp"
#include "mecsim/deployment.hpp"
#include "mecsim/latency.hpp"
#include "mecsim/stats.hpp"

namespace mecsim
{

enum class RuleKind
{
  Rsrp,
  Mec,
  Custom,
};

// Association rules are stored by kind and resolved against the tiers at run
// time, so sweeps that change powers or capacities move the biases with them.
struct NamedRule
{
  std::string name;
  RuleKind kind = RuleKind::Rsrp;
  std::vector<double> custom_bias;

  AssociationRule resolve (std::span<const TierConfig> tiers) const;

  friend bool operator== (const NamedRule &, const NamedRule &) = default;
};

struct ExperimentConfig
{
  NetworkConfig network;
  ChannelParams channel;
  std::vector<NamedRule> rules;
  TaskRanges tasks;
  std::size_t realizations = 10000;
  std::uint64_t master_seed = 1;
  double epdb_threshold_s = 0.4;
  InterferenceModel interference_model = InterferenceModel::AllOutOfCell;
  LoadModel load_model = LoadModel::AnalyticalMean;
  ThresholdGrid ccdf_grid;

  // Throws ConfigError.
  void validate () const;
};

// Baseline two-tier network with C_2 = 10 Gcycles/s and C_1 set for omega = 2.
ExperimentConfig baseline_config ();

struct UeLatency
{
  std::size_t ue = 0;
  EnbRef serving;
  double sinr = 0.0;
  LatencyBreakdown latency;
};

struct RuleRealization
{
  AssociationOutcome association;
  std::vector<UeLatency> ues;
  std::vector<std::size_t> tier_counts;
};

struct RealizationResult
{
  std::size_t index = 0;
  std::size_t resampled = 0;
  DeploymentRealization deployment;
  std::vector<TaskSpec> tasks;
  std::vector<RuleRealization> rules;
  std::size_t non_cohesive = 0; // UEs where rules[0] and rules[1] disagree
};

// Deterministic in (master_seed, index). Deployment, tasks and fading are
// shared by every rule; only the association and what follows differ.
RealizationResult run_realization (const ExperimentConfig &cfg, std::size_t index);

struct RuleSamples
{
  std::vector<double> epdb_s; // realization order, UE order within each
  std::vector<std::size_t> tier_counts;
};

struct ExperimentResult
{
  std::vector<RuleSamples> rules;
  std::size_t ue_count = 0;
  std::size_t non_cohesive = 0;
  std::size_t resampled = 0;
  std::size_t realizations = 0;
};

// Runs every realization on up to `threads` workers. The result does not
// depend on `threads`.
ExperimentResult run_experiment (const ExperimentConfig &cfg, std::size_t threads);

struct RunStatistics
{
  std::string rule;
  EpdbStatistics epdb;
  std::vector<double> assoc_fraction; // per tier
  Proportion non_cohesive;
  std::size_t realizations = 0;
  std::size_t resampled = 0;
};

std::vector<RunStatistics> summarize (const ExperimentConfig &cfg, ExperimentResult result);

enum class SweepAxis
{
  DensityRatio, // lambda_2 / lambda_1
  Omega,        // rho_1 / gamma_1 with rho_1 fixed by the tier powers
  Threshold,    // E-PDB target
};

// lambda_2 = ratio * lambda_1.
ExperimentConfig with_density_ratio (ExperimentConfig cfg, double ratio);
// C_1 = C_2 * rho_1 / omega; powers and C_2 are untouched.
ExperimentConfig with_omega (ExperimentConfig cfg, double omega);
// Rescales every tier capacity so the lowest tier gets `capacity`; keeps the
// gamma ratios.
ExperimentConfig with_lowest_tier_capacity (ExperimentConfig cfg, double capacity);

struct SweepPoint
{
  double axis_value = 0.0;
  std::vector<RunStatistics> rules;
};

std::vector<SweepPoint> sweep (const ExperimentConfig &cfg, SweepAxis axis,
                               std::span<const double> values, std::size_t threads);

struct CalibrationResult
{
  double capacity = 0.0; // chosen lowest-tier capacity, cycles/s
  double cost = 0.0;     // squared error at the chosen capacity
  std::vector<double> candidates;
  std::vector<std::vector<double>> violation; // per candidate, per rule
};

// Grid search for the lowest-tier MEC capacity minimizing the squared error
// between per-rule violation probabilities and `targets`.
CalibrationResult calibrate_lowest_tier_capacity (const ExperimentConfig &cfg,
                                                  std::span<const double> targets,
                                                  std::span<const double> candidates,
                                                  std::size_t threads);

// `rule,axis_value,threshold_s,ccdf,violation_prob,ci_lo,ci_hi,p50_epdb_s,
// assoc_frac_tier1..K,non_cohesive,outages,realizations`.
// With `ccdf_rows` every rule/point gets one row per CCDF grid threshold;
// otherwise one row at the configured E-PDB threshold.
void write_statistics_csv (std::ostream &out, std::span<const SweepPoint> points,
                           std::size_t tier_count, bool ccdf_rows);

std::vector<std::string> statistics_csv_header (std::size_t tier_count);

} // namespace mecsim
