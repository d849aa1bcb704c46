#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "mecsim/deployment.hpp"

namespace mecsim
{

// Per-tier bias of the biased max-received-power association: a UE at y is
// served by the eNB maximizing bias[tier] * |x - y|^-alpha.
struct AssociationRule
{
  std::vector<double> bias_per_tier; // linear, > 0

  AssociationRule scaled (double factor) const;
  void validate (std::size_t tier_count) const;

  friend bool operator== (const AssociationRule &, const AssociationRule &) = default;
};

// Max downlink RSRP: bias = tier transmit power in watts.
AssociationRule rsrp_rule (std::span<const TierConfig> tiers);
// Computational proximity: bias = MEC host capacity.
AssociationRule mec_rule (std::span<const TierConfig> tiers);

struct AssociationOutcome
{
  std::vector<EnbRef> serving;           // per UE
  std::vector<std::size_t> serving_flat; // per UE, flat eNB id
  std::vector<std::size_t> load;         // per flat eNB id

  std::vector<std::size_t> tier_counts (std::size_t tier_count) const;
};

// Winner for a single location. Ties go to the lowest (tier, index).
EnbRef best_enb (Point2 location, const DeploymentRealization &deployment,
                 const AssociationRule &rule, double alpha);

AssociationOutcome associate (const DeploymentRealization &deployment, const AssociationRule &rule,
                              double alpha);

// Infinite-plane PPP association statistics for the typical UE.
struct AssociationStatistics
{
  std::vector<double> delta;
  std::vector<double> assoc_prob; // lambda_i / delta_i
  std::vector<double> mean_load;  // lambda_u / delta_i
};

AssociationStatistics analytical_stats (const NetworkConfig &cfg, const AssociationRule &rule,
                                        double alpha);

// Consecutive-tier ratios; the last entry of each vector is 1.
struct DisparityProfile
{
  std::vector<double> rho;   // P_i / P_{i+1}, linear
  std::vector<double> gamma; // C_i / C_{i+1}
  std::vector<double> omega; // rho_i / gamma_i
};

DisparityProfile disparity_profile (std::span<const TierConfig> tiers);

std::size_t count_non_cohesive (const AssociationOutcome &a, const AssociationOutcome &b);

// Fraction of UEs whose serving eNB differs between the two rules.
double non_cohesive_fraction (const DeploymentRealization &deployment, const AssociationRule &rule_a,
                              const AssociationRule &rule_b, double alpha);

// Winner flat id sampled at pixel centers. Row 0 is the lowest y.
struct CoverageMap
{
  std::size_t resolution = 0;
  double window_side_km = 0.0;
  std::vector<std::size_t> ids; // row-major

  std::size_t at (std::size_t row, std::size_t col) const { return ids[row * resolution + col]; }
  Point2 pixel_center (std::size_t row, std::size_t col) const;
};

CoverageMap coverage_map (const DeploymentRealization &deployment, const AssociationRule &rule,
                          double alpha, std::size_t grid_resolution);

// Plain PGM (P2), one id per pixel, top row = highest y.
void write_coverage_pgm (std::ostream &out, const CoverageMap &map);
// `id,tier,index,x_km,y_km` with tier 1-based.
void write_coverage_legend (std::ostream &out, const DeploymentRealization &deployment);

} // namespace mecsim
