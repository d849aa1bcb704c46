#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mecsim/random.hpp"

namespace mecsim
{

struct Point2
{
  double x = 0.0; // km
  double y = 0.0; // km

  friend bool operator== (const Point2 &, const Point2 &) = default;
};

// Radio and compute resources of one tier. Tiers are listed from the most
// powerful (macro) downwards.
struct TierConfig
{
  double tx_power_dbm = 0.0;
  double mec_capacity = 0.0; // cycles/s
  double enb_density = 0.0;  // eNBs per km^2
  double bandwidth_hz = 0.0;

  friend bool operator== (const TierConfig &, const TierConfig &) = default;
};

struct NetworkConfig
{
  std::vector<TierConfig> tiers;
  double ue_density = 0.0; // UEs per km^2
  double window_area_km2 = 0.0;

  std::size_t tier_count () const { return tiers.size (); }
  double window_side_km () const;

  // Throws std::invalid_argument describing the first violated constraint.
  void validate () const;

  friend bool operator== (const NetworkConfig &, const NetworkConfig &) = default;
};

// Reference to one eNB: tier (0-based) and position within that tier's list.
struct EnbRef
{
  std::size_t tier = 0;
  std::size_t index = 0;

  friend bool operator== (const EnbRef &, const EnbRef &) = default;
  friend auto operator<=> (const EnbRef &, const EnbRef &) = default;
};

struct DeploymentRealization
{
  std::vector<std::vector<Point2>> enbs; // per tier
  std::vector<Point2> ues;
  double window_side_km = 0.0;

  std::size_t tier_count () const { return enbs.size (); }
  std::size_t enb_count () const;

  // eNBs are also addressed by a flat id: tier 0 first, then tier 1, ...
  std::size_t flat_id (EnbRef ref) const;
  EnbRef enb_ref (std::size_t flat_id) const;
  const Point2 &enb_position (EnbRef ref) const { return enbs[ref.tier][ref.index]; }

  friend bool operator== (const DeploymentRealization &, const DeploymentRealization &) = default;
};

// Homogeneous PPP on the square [0, side)^2.
std::vector<Point2> sample_ppp (double density, double window_side_km, Rng &rng);

// One independent sub-stream per tier and one for the UEs, all derived from
// `key` (only key.sub is overwritten).
DeploymentRealization sample_deployment (const NetworkConfig &cfg, StreamKey key);

struct SampledDeployment
{
  DeploymentRealization deployment;
  std::size_t resampled = 0; // draws discarded because no eNB existed
};

// Redraws (bumping key.attempt) until at least one eNB exists.
SampledDeployment sample_nonempty_deployment (const NetworkConfig &cfg, StreamKey key,
                                              std::size_t max_attempts = 1000);

// Euclidean distance on the torus of the given side.
double toroidal_distance (Point2 a, Point2 b, double window_side_km);

// `tier,x_km,y_km` with tier 0 for UEs and 1..K for eNB tiers.
void write_deployment_csv (std::ostream &out, const DeploymentRealization &deployment);

} // namespace mecsim
