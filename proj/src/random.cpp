#include "mecsim/random.hpp"

#include <array>

namespace mecsim
{

Rng
make_stream (const StreamKey &key)
{
  // seed_seq mixes 32-bit words; split every field into its two halves.
  std::array<std::uint32_t, 10> words{};
  const std::array<std::uint64_t, 5> fields{key.master_seed, key.realization,
                                            static_cast<std::uint64_t> (key.tag), key.sub,
                                            key.attempt};
  for (std::size_t i = 0; i < fields.size (); ++i)
    {
      words[2 * i] = static_cast<std::uint32_t> (fields[i] & 0xffffffffu);
      words[2 * i + 1] = static_cast<std::uint32_t> (fields[i] >> 32);
    }
  std::seed_seq seq (words.begin (), words.end ());
  return Rng (seq);
}

} // namespace mecsim
