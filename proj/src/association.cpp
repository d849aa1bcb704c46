#include "mecsim/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mecsim/csv.hpp"
#include "mecsim/units.hpp"

namespace mecsim
{

namespace
{

double
torus_distance_sq (Point2 a, Point2 b, double side)
{
  double dx = std::abs (a.x - b.x);
  double dy = std::abs (a.y - b.y);
  dx = std::min (dx, side - dx);
  dy = std::min (dy, side - dy);
  return dx * dx + dy * dy;
}

// Maximizing bias * d^-alpha is the same as minimizing d / bias^(1/alpha).
// Biases are normalized by their maximum first so the weights stay in (0, 1].
std::vector<double>
distance_weights (const AssociationRule &rule, double alpha)
{
  const double top = *std::max_element (rule.bias_per_tier.begin (), rule.bias_per_tier.end ());
  std::vector<double> w;
  w.reserve (rule.bias_per_tier.size ());
  for (double b : rule.bias_per_tier)
    w.push_back (std::pow (b / top, 1.0 / alpha));
  return w;
}

void
check_alpha (double alpha)
{
  if (!(std::isfinite (alpha) && alpha > 0))
    throw std::invalid_argument ("association: pathloss exponent must be > 0");
}

EnbRef
best_with_weights (Point2 y, const DeploymentRealization &dep, const std::vector<double> &weights)
{
  const double side = dep.window_side_km;
  EnbRef best{};
  double best_score = std::numeric_limits<double>::infinity ();
  bool found = false;
  for (std::size_t t = 0; t < dep.enbs.size (); ++t)
    {
      const auto &tier = dep.enbs[t];
      if (tier.empty ())
        continue;
      std::size_t nearest = 0;
      double nearest_sq = std::numeric_limits<double>::infinity ();
      for (std::size_t i = 0; i < tier.size (); ++i)
        {
          const double d2 = torus_distance_sq (y, tier[i], side);
          if (d2 < nearest_sq)
            {
              nearest_sq = d2;
              nearest = i;
            }
        }
      const double score = std::sqrt (nearest_sq) / weights[t];
      if (!found || score < best_score)
        {
          best_score = score;
          best = {t, nearest};
          found = true;
        }
    }
  if (!found)
    throw std::invalid_argument ("association: deployment has no eNB");
  return best;
}

} // namespace

AssociationRule
AssociationRule::scaled (double factor) const
{
  AssociationRule out = *this;
  for (double &b : out.bias_per_tier)
    b *= factor;
  return out;
}

void
AssociationRule::validate (std::size_t tier_count) const
{
  if (bias_per_tier.size () != tier_count)
    throw std::invalid_argument ("association rule: expected " + std::to_string (tier_count)
                                 + " biases, got " + std::to_string (bias_per_tier.size ()));
  for (double b : bias_per_tier)
    if (!(std::isfinite (b) && b > 0))
      throw std::invalid_argument ("association rule: biases must be finite and > 0");
}

AssociationRule
rsrp_rule (std::span<const TierConfig> tiers)
{
  AssociationRule rule;
  for (const auto &t : tiers)
    rule.bias_per_tier.push_back (dbm_to_watts (t.tx_power_dbm));
  return rule;
}

AssociationRule
mec_rule (std::span<const TierConfig> tiers)
{
  AssociationRule rule;
  for (const auto &t : tiers)
    rule.bias_per_tier.push_back (t.mec_capacity);
  return rule;
}

std::vector<std::size_t>
AssociationOutcome::tier_counts (std::size_t tier_count) const
{
  std::vector<std::size_t> counts (tier_count, 0);
  for (const auto &s : serving)
    ++counts.at (s.tier);
  return counts;
}

EnbRef
best_enb (Point2 location, const DeploymentRealization &deployment, const AssociationRule &rule,
          double alpha)
{
  check_alpha (alpha);
  rule.validate (deployment.tier_count ());
  return best_with_weights (location, deployment, distance_weights (rule, alpha));
}

AssociationOutcome
associate (const DeploymentRealization &deployment, const AssociationRule &rule, double alpha)
{
  check_alpha (alpha);
  rule.validate (deployment.tier_count ());
  if (deployment.enb_count () == 0)
    throw std::invalid_argument ("associate: deployment has no eNB");

  const auto weights = distance_weights (rule, alpha);
  std::vector<std::size_t> tier_offset (deployment.tier_count (), 0);
  for (std::size_t t = 1; t < deployment.tier_count (); ++t)
    tier_offset[t] = tier_offset[t - 1] + deployment.enbs[t - 1].size ();

  AssociationOutcome out;
  out.serving.reserve (deployment.ues.size ());
  out.serving_flat.reserve (deployment.ues.size ());
  out.load.assign (deployment.enb_count (), 0);
  for (const auto &ue : deployment.ues)
    {
      const EnbRef ref = best_with_weights (ue, deployment, weights);
      const std::size_t flat = tier_offset[ref.tier] + ref.index;
      out.serving.push_back (ref);
      out.serving_flat.push_back (flat);
      ++out.load[flat];
    }
  return out;
}

AssociationStatistics
analytical_stats (const NetworkConfig &cfg, const AssociationRule &rule, double alpha)
{
  check_alpha (alpha);
  rule.validate (cfg.tier_count ());
  const double top = *std::max_element (rule.bias_per_tier.begin (), rule.bias_per_tier.end ());
  const double exponent = 2.0 / alpha;

  double weighted_density = 0.0;
  std::vector<double> scaled (cfg.tier_count ());
  for (std::size_t j = 0; j < cfg.tier_count (); ++j)
    {
      scaled[j] = std::pow (rule.bias_per_tier[j] / top, exponent);
      weighted_density += cfg.tiers[j].enb_density * scaled[j];
    }

  AssociationStatistics stats;
  for (std::size_t i = 0; i < cfg.tier_count (); ++i)
    {
      const double delta = weighted_density / scaled[i];
      stats.delta.push_back (delta);
      stats.assoc_prob.push_back (cfg.tiers[i].enb_density / delta);
      stats.mean_load.push_back (cfg.ue_density / delta);
    }
  return stats;
}

DisparityProfile
disparity_profile (std::span<const TierConfig> tiers)
{
  DisparityProfile p;
  for (std::size_t i = 0; i < tiers.size (); ++i)
    {
      if (i + 1 < tiers.size ())
        {
          p.rho.push_back (dbm_to_watts (tiers[i].tx_power_dbm)
                           / dbm_to_watts (tiers[i + 1].tx_power_dbm));
          p.gamma.push_back (tiers[i].mec_capacity / tiers[i + 1].mec_capacity);
        }
      else
        {
          p.rho.push_back (1.0);
          p.gamma.push_back (1.0);
        }
      p.omega.push_back (p.rho.back () / p.gamma.back ());
    }
  return p;
}

std::size_t
count_non_cohesive (const AssociationOutcome &a, const AssociationOutcome &b)
{
  if (a.serving.size () != b.serving.size ())
    throw std::invalid_argument ("count_non_cohesive: outcomes cover different UE sets");
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.serving.size (); ++k)
    n += a.serving[k] != b.serving[k] ? 1 : 0;
  return n;
}

double
non_cohesive_fraction (const DeploymentRealization &deployment, const AssociationRule &rule_a,
                       const AssociationRule &rule_b, double alpha)
{
  if (deployment.ues.empty ())
    return 0.0;
  const auto a = associate (deployment, rule_a, alpha);
  const auto b = associate (deployment, rule_b, alpha);
  return static_cast<double> (count_non_cohesive (a, b))
         / static_cast<double> (deployment.ues.size ());
}

Point2
CoverageMap::pixel_center (std::size_t row, std::size_t col) const
{
  const double step = window_side_km / static_cast<double> (resolution);
  return {(static_cast<double> (col) + 0.5) * step, (static_cast<double> (row) + 0.5) * step};
}

CoverageMap
coverage_map (const DeploymentRealization &deployment, const AssociationRule &rule, double alpha,
              std::size_t grid_resolution)
{
  if (grid_resolution < 2)
    throw std::invalid_argument ("coverage_map: grid resolution must be >= 2");
  check_alpha (alpha);
  rule.validate (deployment.tier_count ());
  if (deployment.enb_count () == 0)
    throw std::invalid_argument ("coverage_map: deployment has no eNB");

  const auto weights = distance_weights (rule, alpha);
  CoverageMap map;
  map.resolution = grid_resolution;
  map.window_side_km = deployment.window_side_km;
  map.ids.resize (grid_resolution * grid_resolution);
  for (std::size_t r = 0; r < grid_resolution; ++r)
    for (std::size_t c = 0; c < grid_resolution; ++c)
      {
        const EnbRef ref = best_with_weights (map.pixel_center (r, c), deployment, weights);
        map.ids[r * grid_resolution + c] = deployment.flat_id (ref);
      }
  return map;
}

void
write_coverage_pgm (std::ostream &out, const CoverageMap &map)
{
  std::size_t max_id = 1;
  for (std::size_t id : map.ids)
    max_id = std::max (max_id, id);
  out << "P2\n" << map.resolution << ' ' << map.resolution << '\n' << max_id << '\n';
  for (std::size_t r = map.resolution; r-- > 0;)
    {
      for (std::size_t c = 0; c < map.resolution; ++c)
        {
          if (c)
            out << ' ';
          out << map.at (r, c);
        }
      out << '\n';
    }
}

void
write_coverage_legend (std::ostream &out, const DeploymentRealization &deployment)
{
  out << "id,tier,index,x_km,y_km\n";
  std::size_t id = 0;
  for (std::size_t t = 0; t < deployment.enbs.size (); ++t)
    for (std::size_t i = 0; i < deployment.enbs[t].size (); ++i, ++id)
      {
        const auto &p = deployment.enbs[t][i];
        out << id << ',' << t + 1 << ',' << i << ',' << csv::format_double (p.x) << ','
            << csv::format_double (p.y) << '\n';
      }
}

} // namespace mecsim
