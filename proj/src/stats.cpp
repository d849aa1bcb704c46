#include "mecsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mecsim/errors.hpp"

namespace mecsim
{

std::vector<double>
ThresholdGrid::values () const
{
  std::vector<double> out;
  out.reserve (points);
  if (points == 1)
    {
      out.push_back (min_s);
      return out;
    }
  const double step = (max_s - min_s) / static_cast<double> (points - 1);
  for (std::size_t i = 0; i < points; ++i)
    out.push_back (min_s + step * static_cast<double> (i));
  return out;
}

void
ThresholdGrid::validate () const
{
  if (points == 0)
    throw ConfigError ("ccdf_grid.points must be >= 1");
  if (!std::isfinite (min_s) || !std::isfinite (max_s) || min_s > max_s)
    throw ConfigError ("ccdf_grid.min_s/max_s must be finite with min_s <= max_s");
}

Proportion
wilson_interval (std::size_t successes, std::size_t trials, double z)
{
  if (successes > trials)
    throw std::invalid_argument ("wilson_interval: successes exceed trials");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  if (trials == 0)
    {
      p.ci_hi = 1.0;
      return p;
    }
  const double n = static_cast<double> (trials);
  const double phat = static_cast<double> (successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  p.value = phat;
  p.ci_lo = std::max (0.0, centre - half);
  p.ci_hi = std::min (1.0, centre + half);
  return p;
}

std::size_t
count_exceeding (std::span<const double> sorted, double threshold)
{
  const auto it = std::upper_bound (sorted.begin (), sorted.end (), threshold);
  return static_cast<std::size_t> (sorted.end () - it);
}

double
ccdf_at (std::span<const double> sorted, double threshold)
{
  if (sorted.empty ())
    return 0.0;
  return static_cast<double> (count_exceeding (sorted, threshold))
         / static_cast<double> (sorted.size ());
}

double
percentile_nearest_rank (std::span<const double> sorted, double percent)
{
  if (sorted.empty ())
    return std::numeric_limits<double>::quiet_NaN ();
  if (!(percent > 0 && percent <= 100))
    throw std::invalid_argument ("percentile_nearest_rank: percent must be in (0, 100]");
  const double n = static_cast<double> (sorted.size ());
  auto rank = static_cast<std::size_t> (std::ceil (percent / 100.0 * n));
  rank = std::clamp<std::size_t> (rank, 1, sorted.size ());
  return sorted[rank - 1];
}

EpdbStatistics
aggregate (std::vector<double> samples, double threshold_s, std::span<const double> grid)
{
  EpdbStatistics s;
  s.threshold_s = threshold_s;
  for (double &x : samples)
    if (!std::isfinite (x))
      {
        x = std::numeric_limits<double>::infinity ();
        ++s.outage_count;
      }
  std::sort (samples.begin (), samples.end ());
  s.sorted_samples = std::move (samples);

  s.ccdf.reserve (grid.size ());
  for (double t : grid)
    s.ccdf.push_back ({t, ccdf_at (s.sorted_samples, t)});
  s.violation
      = wilson_interval (count_exceeding (s.sorted_samples, threshold_s), s.sorted_samples.size ());
  for (int p : {10, 50, 90})
    s.percentiles[p] = percentile_nearest_rank (s.sorted_samples, p);
  return s;
}

} // namespace mecsim
