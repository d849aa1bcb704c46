#pragma once

#include <cstddef>

#include "mecsim/association.hpp"
#include "mecsim/deployment.hpp"
#include "mecsim/random.hpp"

namespace mecsim
{

struct TaskSpec
{
  double packet_bits = 0.0;
  double cycles_per_bit = 0.0;
};

struct TaskRanges
{
  double packet_bits_min = 100e3;
  double packet_bits_max = 300e3;
  double cycles_per_bit_min = 500.0;
  double cycles_per_bit_max = 1500.0;

  void validate () const;

  friend bool operator== (const TaskRanges &, const TaskRanges &) = default;
};

// Packet size, then cycles/bit, each uniform on its range.
TaskSpec sample_task (const TaskRanges &ranges, Rng &rng);

enum class LoadModel
{
  AnalyticalMean, // divide by the tier's mean load from analytical_stats
  RealizedCount,  // divide by the serving eNB's actual UE count
};

struct ResourceShare
{
  double bandwidth_hz = 0.0;
  double cpu_fraction = 0.0;
};

// Equal split of the serving eNB's bandwidth and MEC capacity among `load`
// users. Loads below one are treated as one: a UE never gets more than the
// whole eNB.
ResourceShare equal_share (double bandwidth_hz, double load);

ResourceShare resource_share (std::size_t serving_tier, const AssociationStatistics &stats,
                              const NetworkConfig &cfg);
ResourceShare realized_resource_share (std::size_t serving_tier, std::size_t cell_load,
                                       const NetworkConfig &cfg);

// +inf when sinr <= 0 (outage).
double radio_time (const TaskSpec &task, const ResourceShare &share, double sinr);
double exec_time (const TaskSpec &task, const ResourceShare &share, double mec_capacity);
inline double
epdb (double t_radio, double t_exc)
{
  return t_radio + t_exc;
}

struct LatencyBreakdown
{
  double rate_bps = 0.0;
  double t_radio_s = 0.0;
  double t_exc_s = 0.0;
  double epdb_s = 0.0;

  bool outage () const;
};

LatencyBreakdown compute_latency (const TaskSpec &task, const ResourceShare &share, double sinr,
                                  double mec_capacity);

} // namespace mecsim
