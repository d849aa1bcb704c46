#include "mecsim/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mecsim/csv.hpp"
#include "mecsim/errors.hpp"

namespace mecsim
{

double
NetworkConfig::window_side_km () const
{
  return std::sqrt (window_area_km2);
}

void
NetworkConfig::validate () const
{
  auto fail = [] (const std::string &what) { throw ConfigError (what); };
  if (tiers.empty ())
    fail ("network.tiers: at least one tier is required");
  for (std::size_t i = 0; i < tiers.size (); ++i)
    {
      const auto &t = tiers[i];
      const std::string prefix = "network.tiers[" + std::to_string (i) + "].";
      if (!std::isfinite (t.tx_power_dbm))
        fail (prefix + "tx_power_dbm must be finite");
      if (!(std::isfinite (t.enb_density) && t.enb_density > 0))
        fail (prefix + "enb_density must be > 0");
      if (!(std::isfinite (t.mec_capacity) && t.mec_capacity > 0))
        fail (prefix + "mec_capacity must be > 0");
      if (!(std::isfinite (t.bandwidth_hz) && t.bandwidth_hz > 0))
        fail (prefix + "bandwidth_hz must be > 0");
      if (i > 0 && t.tx_power_dbm > tiers[i - 1].tx_power_dbm)
        fail (prefix + "tx_power_dbm must not exceed the previous tier");
    }
  if (!(std::isfinite (ue_density) && ue_density > 0))
    fail ("network.ue_density must be > 0");
  if (!(std::isfinite (window_area_km2) && window_area_km2 > 0))
    fail ("network.window_area_km2 must be > 0");
}

std::size_t
DeploymentRealization::enb_count () const
{
  std::size_t n = 0;
  for (const auto &tier : enbs)
    n += tier.size ();
  return n;
}

std::size_t
DeploymentRealization::flat_id (EnbRef ref) const
{
  std::size_t id = 0;
  for (std::size_t t = 0; t < ref.tier; ++t)
    id += enbs[t].size ();
  return id + ref.index;
}

EnbRef
DeploymentRealization::enb_ref (std::size_t flat_id) const
{
  for (std::size_t t = 0; t < enbs.size (); ++t)
    {
      if (flat_id < enbs[t].size ())
        return {t, flat_id};
      flat_id -= enbs[t].size ();
    }
  throw std::out_of_range ("enb_ref: flat id beyond eNB count");
}

std::vector<Point2>
sample_ppp (double density, double window_side_km, Rng &rng)
{
  if (!std::isfinite (density) || !std::isfinite (window_side_km))
    throw std::invalid_argument ("sample_ppp: non-finite input");
  if (density < 0)
    throw std::invalid_argument ("sample_ppp: density must be >= 0");
  if (window_side_km <= 0)
    throw std::invalid_argument ("sample_ppp: window side must be > 0");

  const double mean = density * window_side_km * window_side_km;
  if (mean == 0.0)
    return {};
  std::poisson_distribution<std::size_t> count_dist (mean);
  const std::size_t n = count_dist (rng);

  std::uniform_real_distribution<double> coord (0.0, window_side_km);
  std::vector<Point2> points;
  points.reserve (n);
  for (std::size_t i = 0; i < n; ++i)
    {
      const double x = coord (rng);
      const double y = coord (rng);
      points.push_back ({x, y});
    }
  return points;
}

DeploymentRealization
sample_deployment (const NetworkConfig &cfg, StreamKey key)
{
  const double side = cfg.window_side_km ();
  DeploymentRealization out;
  out.window_side_km = side;
  out.enbs.reserve (cfg.tiers.size ());
  for (std::size_t t = 0; t < cfg.tiers.size (); ++t)
    {
      key.sub = t + 1;
      Rng rng = make_stream (key);
      out.enbs.push_back (sample_ppp (cfg.tiers[t].enb_density, side, rng));
    }
  key.sub = 0;
  Rng ue_rng = make_stream (key);
  out.ues = sample_ppp (cfg.ue_density, side, ue_rng);
  return out;
}

SampledDeployment
sample_nonempty_deployment (const NetworkConfig &cfg, StreamKey key, std::size_t max_attempts)
{
  SampledDeployment out;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt)
    {
      key.attempt = attempt;
      out.deployment = sample_deployment (cfg, key);
      if (out.deployment.enb_count () > 0)
        return out;
      ++out.resampled;
    }
  throw std::runtime_error ("sample_nonempty_deployment: no eNB after "
                            + std::to_string (max_attempts) + " attempts");
}

double
toroidal_distance (Point2 a, Point2 b, double window_side_km)
{
  double dx = std::abs (a.x - b.x);
  double dy = std::abs (a.y - b.y);
  dx = std::min (dx, window_side_km - dx);
  dy = std::min (dy, window_side_km - dy);
  return std::sqrt (dx * dx + dy * dy);
}

void
write_deployment_csv (std::ostream &out, const DeploymentRealization &deployment)
{
  out << "tier,x_km,y_km\n";
  for (const auto &ue : deployment.ues)
    out << "0," << csv::format_double (ue.x) << ',' << csv::format_double (ue.y) << '\n';
  for (std::size_t t = 0; t < deployment.enbs.size (); ++t)
    for (const auto &p : deployment.enbs[t])
      out << t + 1 << ',' << csv::format_double (p.x) << ',' << csv::format_double (p.y) << '\n';
}

} // namespace mecsim
