#include "mecsim/latency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecsim/errors.hpp"

namespace mecsim
{

namespace
{

double
uniform_on (double lo, double hi, Rng &rng)
{
  if (lo == hi)
    {
      // Keep stream consumption identical to the ranged case.
      (void) std::uniform_real_distribution<double> (0.0, 1.0) (rng);
      return lo;
    }
  return std::uniform_real_distribution<double> (lo, hi) (rng);
}

} // namespace

void
TaskRanges::validate () const
{
  auto positive = [] (double v) { return std::isfinite (v) && v > 0; };
  if (!positive (packet_bits_min) || !positive (packet_bits_max))
    throw ConfigError ("task.packet_bits_min/max must be > 0");
  if (packet_bits_min > packet_bits_max)
    throw ConfigError ("task.packet_bits_min must not exceed task.packet_bits_max");
  if (!positive (cycles_per_bit_min) || !positive (cycles_per_bit_max))
    throw ConfigError ("task.cycles_per_bit_min/max must be > 0");
  if (cycles_per_bit_min > cycles_per_bit_max)
    throw ConfigError ("task.cycles_per_bit_min must not exceed task.cycles_per_bit_max");
}

TaskSpec
sample_task (const TaskRanges &ranges, Rng &rng)
{
  TaskSpec task;
  task.packet_bits = uniform_on (ranges.packet_bits_min, ranges.packet_bits_max, rng);
  task.cycles_per_bit = uniform_on (ranges.cycles_per_bit_min, ranges.cycles_per_bit_max, rng);
  return task;
}

ResourceShare
equal_share (double bandwidth_hz, double load)
{
  if (!(load > 0))
    throw std::invalid_argument ("equal_share: load must be > 0");
  const double users = std::max (load, 1.0);
  return {bandwidth_hz / users, 1.0 / users};
}

ResourceShare
resource_share (std::size_t serving_tier, const AssociationStatistics &stats,
                const NetworkConfig &cfg)
{
  return equal_share (cfg.tiers.at (serving_tier).bandwidth_hz, stats.mean_load.at (serving_tier));
}

ResourceShare
realized_resource_share (std::size_t serving_tier, std::size_t cell_load, const NetworkConfig &cfg)
{
  if (cell_load == 0)
    throw std::invalid_argument ("realized_resource_share: serving cell has no UE");
  return equal_share (cfg.tiers.at (serving_tier).bandwidth_hz, static_cast<double> (cell_load));
}

double
radio_time (const TaskSpec &task, const ResourceShare &share, double sinr)
{
  if (!(share.bandwidth_hz > 0))
    throw std::invalid_argument ("radio_time: bandwidth must be > 0");
  if (!(sinr > 0))
    return std::numeric_limits<double>::infinity ();
  return task.packet_bits / (share.bandwidth_hz * std::log2 (1.0 + sinr));
}

double
exec_time (const TaskSpec &task, const ResourceShare &share, double mec_capacity)
{
  if (!(share.cpu_fraction > 0) || !(mec_capacity > 0))
    throw std::invalid_argument ("exec_time: CPU fraction and capacity must be > 0");
  return task.packet_bits * task.cycles_per_bit / (share.cpu_fraction * mec_capacity);
}

bool
LatencyBreakdown::outage () const
{
  return !std::isfinite (epdb_s);
}

LatencyBreakdown
compute_latency (const TaskSpec &task, const ResourceShare &share, double sinr,
                 double mec_capacity)
{
  LatencyBreakdown out;
  out.rate_bps = sinr > 0 ? share.bandwidth_hz * std::log2 (1.0 + sinr) : 0.0;
  out.t_radio_s = radio_time (task, share, sinr);
  out.t_exc_s = exec_time (task, share, mec_capacity);
  out.epdb_s = epdb (out.t_radio_s, out.t_exc_s);
  return out;
}

} // namespace mecsim
