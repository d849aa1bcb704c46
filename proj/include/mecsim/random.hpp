#pragma once

#include <cstdint>
#include <random>

namespace mecsim
{

using Rng = std::mt19937_64;

// What a sub-stream is used for. Values are part of the seeding contract and
// must not be renumbered.
enum class StreamTag : std::uint64_t
{
  Deployment = 1,
  Tasks = 2,
  Fading = 3,
  Scheduling = 4,
};

// Identifies one logical random stream. Two keys that differ in any field give
// statistically independent generators, so realizations can be evaluated in
// any order and on any number of workers.
struct StreamKey
{
  std::uint64_t master_seed = 0;
  std::uint64_t realization = 0;
  StreamTag tag = StreamTag::Deployment;
  std::uint64_t sub = 0;
  std::uint64_t attempt = 0;
};

Rng make_stream (const StreamKey &key);

} // namespace mecsim
