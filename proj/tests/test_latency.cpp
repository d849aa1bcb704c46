#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <ratio>

#include "mecsim/errors.hpp"
#include "mecsim/latency.hpp"
#include "mecsim/montecarlo.hpp"

using namespace mecsim;

namespace
{

// Minimal dimension tracking: exponents of bit, second and cycle.
template <int Bit, int Sec, int Cyc> struct Q
{
  double v;
};

template <int B1, int S1, int C1, int B2, int S2, int C2>
constexpr Q<B1 + B2, S1 + S2, C1 + C2>
operator* (Q<B1, S1, C1> a, Q<B2, S2, C2> b)
{
  return {a.v * b.v};
}

template <int B1, int S1, int C1, int B2, int S2, int C2>
constexpr Q<B1 - B2, S1 - S2, C1 - C2>
operator/ (Q<B1, S1, C1> a, Q<B2, S2, C2> b)
{
  return {a.v / b.v};
}

template <int B, int S, int C>
constexpr Q<B, S, C>
operator+ (Q<B, S, C> a, Q<B, S, C> b)
{
  return {a.v + b.v};
}

using Bits = Q<1, 0, 0>;
using Hertz = Q<0, -1, 0>;
using Seconds = Q<0, 1, 0>;
using Scalar = Q<0, 0, 0>;
using CyclesPerBit = Q<-1, 0, 1>;
using CyclesPerSecond = Q<0, -1, 1>;
// Spectral efficiency log2(1 + SINR) counts bits per second per hertz.
using BitsPerHertzSecond = Q<1, 0, 0>;

constexpr auto
typed_radio_time (Bits l, Hertz b, BitsPerHertzSecond se)
{
  return l / (b * se);
}

constexpr auto
typed_exec_time (Bits l, CyclesPerBit f, Scalar y, CyclesPerSecond c)
{
  return l * f / (y * c);
}

static_assert (std::is_same_v<decltype (typed_radio_time ({}, {}, {})), Seconds>);
static_assert (std::is_same_v<decltype (typed_exec_time ({}, {}, {}, {})), Seconds>);
static_assert (std::is_same_v<decltype (typed_radio_time ({}, {}, {})
                                        + typed_exec_time ({}, {}, {}, {})),
                              Seconds>);

TaskSpec
task (double bits, double cpb)
{
  return TaskSpec{bits, cpb};
}

} // namespace

TEST_SUITE ("latency")
{
  TEST_CASE ("radio time")
  {
    CHECK (radio_time (task (1e6, 1), {1e6, 1}, 1.0) == doctest::Approx (1.0));
    CHECK (radio_time (task (100e3, 1), {1e6, 1}, 3.0) == doctest::Approx (0.05));
    CHECK (radio_time (task (100e3, 1), {1e6, 1}, 3.0)
           == doctest::Approx (typed_radio_time ({100e3}, {1e6}, {std::log2 (4.0)}).v));
  }

  TEST_CASE ("execution time")
  {
    CHECK (exec_time (task (1e3, 1000), {1, 1.0}, 1e6) == doctest::Approx (1.0));
    CHECK (exec_time (task (200e3, 1000), {1, 0.1}, 1e9) == doctest::Approx (2.0));
    CHECK (exec_time (task (200e3, 1000), {1, 0.1}, 1e9)
           == doctest::Approx (typed_exec_time ({200e3}, {1000}, {0.1}, {1e9}).v));
    CHECK_THROWS (exec_time (task (1, 1), {1, 0.0}, 1e9));
  }

  TEST_CASE ("e-pdb adds the two delays")
  {
    CHECK (epdb (0.05, 2.0) == doctest::Approx (2.05));
    const auto l = compute_latency (task (100e3, 1000), {1e6, 0.1}, 3.0, 1e9);
    CHECK (l.t_radio_s == doctest::Approx (0.05));
    CHECK (l.t_exc_s == doctest::Approx (1.0));
    CHECK (l.epdb_s == doctest::Approx (1.05));
    CHECK (l.rate_bps == doctest::Approx (2e6));
    CHECK_FALSE (l.outage ());
  }

  TEST_CASE ("zero sinr is an outage")
  {
    CHECK (std::isinf (radio_time (task (1e5, 1), {1e6, 1}, 0.0)));
    const auto l = compute_latency (task (1e5, 1000), {1e6, 0.1}, 0.0, 1e9);
    CHECK (l.outage ());
    CHECK (l.rate_bps == 0.0);
  }

  TEST_CASE ("analytical shares for the baseline network")
  {
    auto cfg = baseline_config ().network;
    const auto stats = analytical_stats (cfg, AssociationRule{{40.0, 1.0}}, 4.0);
    const auto share = resource_share (0, stats, cfg);
    CHECK (stats.mean_load[0] == doctest::Approx (30.79).epsilon (0.001));
    CHECK (share.cpu_fraction == doctest::Approx (0.0325).epsilon (0.002));
    CHECK (share.bandwidth_hz == doctest::Approx (10e6 / stats.mean_load[0]));
  }

  TEST_CASE ("loads below one give the whole enb")
  {
    const auto s = equal_share (5e6, 0.25);
    CHECK (s.bandwidth_hz == 5e6);
    CHECK (s.cpu_fraction == 1.0);
    CHECK_THROWS (equal_share (5e6, 0.0));
  }

  TEST_CASE ("realized shares add up to the cell resources")
  {
    auto cfg = baseline_config ().network;
    for (std::size_t n = 1; n < 50; ++n)
      {
        const auto s = realized_resource_share (1, n, cfg);
        CHECK (s.bandwidth_hz * static_cast<double> (n) == doctest::Approx (10e6));
        CHECK (s.cpu_fraction * static_cast<double> (n) == doctest::Approx (1.0));
      }
    CHECK_THROWS (realized_resource_share (1, 0, cfg));
  }

  TEST_CASE ("task sampling stays in range")
  {
    Rng rng = make_stream ({1, 0, StreamTag::Tasks, 0, 0});
    const TaskRanges r;
    double bits = 0.0, cpb = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
      {
        const auto t = sample_task (r, rng);
        CHECK (t.packet_bits >= 100e3);
        CHECK (t.packet_bits <= 300e3);
        CHECK (t.cycles_per_bit >= 500.0);
        CHECK (t.cycles_per_bit <= 1500.0);
        bits += t.packet_bits;
        cpb += t.cycles_per_bit;
      }
    CHECK (bits / n == doctest::Approx (200e3).epsilon (0.01));
    CHECK (cpb / n == doctest::Approx (1000.0).epsilon (0.01));
  }

  TEST_CASE ("degenerate ranges consume the same draws")
  {
    TaskRanges fixed{2e5, 2e5, 700, 700};
    Rng a = make_stream ({1, 0, StreamTag::Tasks, 0, 0});
    Rng b = make_stream ({1, 0, StreamTag::Tasks, 0, 0});
    for (int i = 0; i < 10; ++i)
      {
        const auto t = sample_task (fixed, a);
        CHECK (t.packet_bits == 2e5);
        CHECK (t.cycles_per_bit == 700.0);
        (void) sample_task (TaskRanges{}, b);
      }
    CHECK (a () == b ());
  }

  TEST_CASE ("task range validation")
  {
    CHECK_NOTHROW (TaskRanges{}.validate ());
    CHECK_THROWS_AS ((TaskRanges{3e5, 1e5, 500, 1500}.validate ()), ConfigError);
    CHECK_THROWS_AS ((TaskRanges{0, 1e5, 500, 1500}.validate ()), ConfigError);
  }

  TEST_CASE ("randomized monotonicity and scaling properties")
  {
    std::mt19937_64 gen (4242);
    std::uniform_real_distribution<double> lbits (1e3, 1e7), f (10, 1e4), bw (1e4, 1e8),
        y (1e-3, 1.0), cap (1e6, 1e12), sinr (1e-3, 1e4), k (1.01, 10.0);
    for (int i = 0; i < 1000; ++i)
      {
        const TaskSpec t{lbits (gen), f (gen)};
        const ResourceShare s{bw (gen), y (gen)};
        const double c = cap (gen), g = sinr (gen), m = k (gen);
        const auto base = compute_latency (t, s, g, c);

        CHECK (compute_latency (t, s, g * m, c).epdb_s < base.epdb_s);
        CHECK (compute_latency (t, {s.bandwidth_hz * m, s.cpu_fraction}, g, c).epdb_s
               < base.epdb_s);
        CHECK (compute_latency (t, {s.bandwidth_hz, s.cpu_fraction}, g, c * m).epdb_s
               < base.epdb_s);
        CHECK (compute_latency ({t.packet_bits * m, t.cycles_per_bit}, s, g, c).epdb_s
               > base.epdb_s);
        CHECK (compute_latency ({t.packet_bits, t.cycles_per_bit * m}, s, g, c).epdb_s
               > base.epdb_s);

        // Both terms are linear in the packet size.
        const auto scaled = compute_latency ({t.packet_bits * m, t.cycles_per_bit}, s, g, c);
        CHECK (scaled.t_radio_s == doctest::Approx (base.t_radio_s * m).epsilon (1e-12));
        CHECK (scaled.t_exc_s == doctest::Approx (base.t_exc_s * m).epsilon (1e-12));
        // Radio time is inversely proportional to bandwidth, execution to capacity.
        CHECK (compute_latency (t, {s.bandwidth_hz * m, s.cpu_fraction}, g, c).t_radio_s
               == doctest::Approx (base.t_radio_s / m).epsilon (1e-12));
        CHECK (compute_latency (t, s, g, c * m).t_exc_s
               == doctest::Approx (base.t_exc_s / m).epsilon (1e-12));
        CHECK (base.epdb_s == doctest::Approx (base.t_radio_s + base.t_exc_s).epsilon (1e-15));
        CHECK (base.t_radio_s > 0);
        CHECK (base.t_exc_s > 0);
      }
  }
}
