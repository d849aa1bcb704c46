#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace mecsim
{

struct ThresholdGrid
{
  double min_s = 0.0;
  double max_s = 3.0;
  std::size_t points = 301;

  std::vector<double> values () const;
  void validate () const;

  friend bool operator== (const ThresholdGrid &, const ThresholdGrid &) = default;
};

struct Proportion
{
  std::size_t successes = 0;
  std::size_t trials = 0;
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

// Wilson score interval; z = 1.96 gives the usual 95% interval.
Proportion wilson_interval (std::size_t successes, std::size_t trials,
                            double z = 1.959963984540054);

// P[X > t] over an ascending sample; +inf samples exceed every threshold.
double ccdf_at (std::span<const double> sorted, double threshold);
std::size_t count_exceeding (std::span<const double> sorted, double threshold);

// Smallest sample with at least p% of the pool at or below it.
double percentile_nearest_rank (std::span<const double> sorted, double percent);

struct CcdfPoint
{
  double threshold_s = 0.0;
  double probability = 0.0;
};

struct EpdbStatistics
{
  std::vector<double> sorted_samples; // outages sort last as +inf
  std::vector<CcdfPoint> ccdf;
  double threshold_s = 0.0;
  Proportion violation;
  std::map<int, double> percentiles; // 10, 50, 90
  std::size_t outage_count = 0;

  double p50 () const { return percentiles.at (50); }
};

EpdbStatistics aggregate (std::vector<double> samples, double threshold_s,
                          std::span<const double> grid);

} // namespace mecsim
