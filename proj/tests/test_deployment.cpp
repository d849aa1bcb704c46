#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "mecsim/deployment.hpp"
#include "mecsim/errors.hpp"
#include "mecsim/montecarlo.hpp"
#include "oracles.hpp"

using namespace mecsim;

namespace
{

StreamKey
key (std::uint64_t seed, std::uint64_t realization = 0)
{
  return StreamKey{seed, realization, StreamTag::Deployment, 0, 0};
}

} // namespace

TEST_SUITE ("deployment")
{
  TEST_CASE ("ppp count has poisson mean and variance")
  {
    // 0.5 per km^2 on 10 km^2: mean 5.
    const double side = std::sqrt (10.0);
    const int n = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < n; ++s)
      {
        Rng rng = make_stream (key (static_cast<std::uint64_t> (s)));
        const double c = static_cast<double> (sample_ppp (0.5, side, rng).size ());
        sum += c;
        sum_sq += c * c;
      }
    const double mean = sum / n;
    const double var = (sum_sq - n * mean * mean) / (n - 1);
    CHECK (std::abs (mean - 5.0) < 3.0 * std::sqrt (5.0 / n));
    // Var of the sample variance for Poisson: (lambda + 2 lambda^2) / n.
    CHECK (std::abs (var - 5.0) < 3.0 * std::sqrt ((5.0 + 50.0) / n));
  }

  TEST_CASE ("ppp count histogram matches the poisson pmf")
  {
    // Mean 30; bins <=20, 21..39 individually, >=40: 21 bins, 20 dof.
    const double side = std::sqrt (10.0);
    const int n = 20000;
    std::vector<double> observed (21, 0.0);
    for (int s = 0; s < n; ++s)
      {
        Rng rng = make_stream (key (1000000u + static_cast<std::uint64_t> (s)));
        const auto c = sample_ppp (3.0, side, rng).size ();
        const std::size_t bin = c <= 20 ? 0 : (c >= 40 ? 20 : c - 20);
        observed[bin] += 1.0;
      }
    std::vector<double> expected (21, 0.0);
    double below = 0.0;
    for (unsigned k = 0; k <= 20; ++k)
      below += oracle::poisson_pmf (k, 30.0);
    expected[0] = below;
    double mid = 0.0;
    for (unsigned k = 21; k <= 39; ++k)
      {
        expected[k - 20] = oracle::poisson_pmf (k, 30.0);
        mid += expected[k - 20];
      }
    expected[20] = 1.0 - below - mid;
    double chi2 = 0.0;
    for (std::size_t b = 0; b < 21; ++b)
      {
        const double e = expected[b] * n;
        chi2 += (observed[b] - e) * (observed[b] - e) / e;
      }
    // 0.999 quantile of chi-square with 20 dof.
    CHECK (chi2 < 45.315);
  }

  TEST_CASE ("zero density gives an empty tier")
  {
    Rng rng = make_stream (key (7));
    CHECK (sample_ppp (0.0, 3.0, rng).empty ());
  }

  TEST_CASE ("invalid ppp arguments are rejected")
  {
    Rng rng = make_stream (key (7));
    CHECK_THROWS (sample_ppp (-1.0, 3.0, rng));
    CHECK_THROWS (sample_ppp (std::nan (""), 3.0, rng));
    CHECK_THROWS (sample_ppp (1.0, 0.0, rng));
  }

  TEST_CASE ("baseline network has the expected mean counts")
  {
    const auto cfg = baseline_config ().network;
    const int n = 4000;
    double t1 = 0.0, t2 = 0.0, u = 0.0;
    for (int s = 0; s < n; ++s)
      {
        const auto dep = sample_deployment (cfg, key (42, static_cast<std::uint64_t> (s)));
        t1 += static_cast<double> (dep.enbs[0].size ());
        t2 += static_cast<double> (dep.enbs[1].size ());
        u += static_cast<double> (dep.ues.size ());
      }
    CHECK (std::abs (t1 / n - 5.0) < 4.0 * std::sqrt (5.0 / n));
    CHECK (std::abs (t2 / n - 30.0) < 4.0 * std::sqrt (30.0 / n));
    CHECK (std::abs (u / n - 300.0) < 4.0 * std::sqrt (300.0 / n));
  }

  TEST_CASE ("points lie inside the window")
  {
    const auto dep = sample_deployment (baseline_config ().network, key (3));
    const double side = dep.window_side_km;
    for (const auto &tier : dep.enbs)
      for (const auto &p : tier)
        {
          CHECK (p.x >= 0.0);
          CHECK (p.x < side);
          CHECK (p.y >= 0.0);
          CHECK (p.y < side);
        }
  }

  TEST_CASE ("sampling is deterministic in the stream key")
  {
    const auto cfg = baseline_config ().network;
    CHECK (sample_deployment (cfg, key (5, 9)) == sample_deployment (cfg, key (5, 9)));
    CHECK_FALSE (sample_deployment (cfg, key (5, 9)) == sample_deployment (cfg, key (5, 10)));
    CHECK_FALSE (sample_deployment (cfg, key (5, 9)) == sample_deployment (cfg, key (6, 9)));
  }

  TEST_CASE ("tiers use independent streams")
  {
    // Changing tier 2's density must not move tier 1 or the UEs.
    auto cfg = baseline_config ().network;
    const auto a = sample_deployment (cfg, key (11));
    cfg.tiers[1].enb_density = 9.0;
    const auto b = sample_deployment (cfg, key (11));
    CHECK (a.enbs[0] == b.enbs[0]);
    CHECK (a.ues == b.ues);
    CHECK_FALSE (a.enbs[1] == b.enbs[1]);
  }

  TEST_CASE ("empty draws are resampled")
  {
    NetworkConfig cfg;
    cfg.tiers = {TierConfig{46.0, 1e9, 0.02, 10e6}};
    cfg.ue_density = 1.0;
    cfg.window_area_km2 = 10.0;
    // Mean 0.2 eNBs: most first draws are empty.
    std::size_t total = 0;
    for (std::uint64_t s = 0; s < 50; ++s)
      {
        const auto r = sample_nonempty_deployment (cfg, key (s));
        CHECK (r.deployment.enb_count () >= 1);
        total += r.resampled;
      }
    CHECK (total > 0);

    cfg.tiers[0].enb_density = 0.0;
    CHECK_THROWS_AS (sample_nonempty_deployment (cfg, key (1), 5), std::runtime_error);
  }

  TEST_CASE ("toroidal distance matches the nine-image brute force")
  {
    std::mt19937_64 rng (2024);
    for (int i = 0; i < 5000; ++i)
      {
        const double side = std::uniform_real_distribution<double> (0.5, 5.0) (rng);
        std::uniform_real_distribution<double> c (0.0, side);
        const Point2 a{c (rng), c (rng)}, b{c (rng), c (rng)};
        CHECK (toroidal_distance (a, b, side)
               == doctest::Approx (oracle::nine_image_distance (a, b, side)).epsilon (1e-12));
      }
  }

  TEST_CASE ("toroidal distance wraps across the edge")
  {
    CHECK (toroidal_distance ({0.1, 0.5}, {0.9, 0.5}, 1.0) == doctest::Approx (0.2));
    CHECK (toroidal_distance ({0.05, 0.05}, {0.95, 0.95}, 1.0)
           == doctest::Approx (std::sqrt (0.02)));
    CHECK (toroidal_distance ({0.2, 0.3}, {0.2, 0.3}, 1.0) == 0.0);
  }

  TEST_CASE ("toroidal distance is a metric")
  {
    std::mt19937_64 rng (77);
    std::uniform_real_distribution<double> c (0.0, 3.0);
    for (int i = 0; i < 2000; ++i)
      {
        const Point2 a{c (rng), c (rng)}, b{c (rng), c (rng)}, d{c (rng), c (rng)};
        const double ab = toroidal_distance (a, b, 3.0);
        CHECK (ab == toroidal_distance (b, a, 3.0));
        CHECK (ab <= toroidal_distance (a, d, 3.0) + toroidal_distance (d, b, 3.0) + 1e-12);
        CHECK (ab <= 3.0 * std::sqrt (0.5) + 1e-12);
      }
  }

  TEST_CASE ("ppp pair counts match complete spatial randomness")
  {
    // On a torus the expected number of pairs closer than r < side/2 is
    // n(n-1)/2 * pi r^2 / area.
    const double side = std::sqrt (10.0);
    const double r = 0.5;
    double observed = 0.0, expected = 0.0;
    for (std::uint64_t s = 0; s < 2000; ++s)
      {
        Rng rng = make_stream (key (500000 + s));
        const auto pts = sample_ppp (3.0, side, rng);
        const double n = static_cast<double> (pts.size ());
        expected += n * (n - 1.0) / 2.0 * std::numbers::pi * r * r / (side * side);
        for (std::size_t i = 0; i < pts.size (); ++i)
          for (std::size_t j = i + 1; j < pts.size (); ++j)
            if (toroidal_distance (pts[i], pts[j], side) < r)
              observed += 1.0;
      }
    CHECK (observed / expected == doctest::Approx (1.0).epsilon (0.03));
  }

  TEST_CASE ("deployment csv lists ues then tiers")
  {
    DeploymentRealization dep;
    dep.window_side_km = 2.0;
    dep.enbs = {{{0.5, 0.25}}, {{1.0, 1.5}, {0.0, 0.0}}};
    dep.ues = {{0.125, 1.75}};
    std::ostringstream out;
    write_deployment_csv (out, dep);
    CHECK (out.str ()
           == "tier,x_km,y_km\n0,0.125,1.75\n1,0.5,0.25\n2,1,1.5\n2,0,0\n");
  }

  TEST_CASE ("flat ids round trip")
  {
    DeploymentRealization dep;
    dep.enbs = {{{0, 0}, {1, 1}}, {}, {{2, 2}}};
    CHECK (dep.enb_count () == 3);
    for (std::size_t f = 0; f < 3; ++f)
      CHECK (dep.flat_id (dep.enb_ref (f)) == f);
    CHECK (dep.enb_ref (2) == EnbRef{2, 0});
  }

  TEST_CASE ("network validation")
  {
    auto cfg = baseline_config ().network;
    CHECK_NOTHROW (cfg.validate ());
    CHECK (cfg.window_side_km () == doctest::Approx (std::sqrt (10.0)));
    auto bad = cfg;
    bad.tiers[1].tx_power_dbm = 50.0;
    CHECK_THROWS_AS (bad.validate (), ConfigError);
    bad = cfg;
    bad.ue_density = -1.0;
    CHECK_THROWS_AS (bad.validate (), ConfigError);
    bad = cfg;
    bad.tiers.clear ();
    CHECK_THROWS_AS (bad.validate (), ConfigError);
  }
}
