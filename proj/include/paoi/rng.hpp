#pragma once

#include <cstdint>
#include <random>

namespace paoi {

using Engine = std::mt19937_64;

// Independent engine for (master seed, stream id). Stream ids are fixed per
// role, so adding users never shifts the streams of existing ones.
inline Engine make_stream(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Engine(seq);
}

// splitmix64 finalizer, used to derive per-replication seeds.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace streams {
inline constexpr std::uint64_t compute_service = 0;
inline constexpr std::uint64_t compute_feed = 1;
inline constexpr std::uint64_t user_arrivals(std::uint64_t u) { return 16 + 2 * u; }
inline constexpr std::uint64_t stage_service(std::uint64_t u) { return 17 + 2 * u; }
}  // namespace streams

}  // namespace paoi
