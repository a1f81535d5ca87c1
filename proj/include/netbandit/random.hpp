#pragma once

#include <cstdint>
#include <random>

namespace netbandit {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive statistically independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for (parent, stream). Replication r of a run with master seed s
/// uses derive_seed(s, r); its environment, agent and oracle streams are
/// derive_seed(rep_seed, 1), (.., 2) and (.., 3).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return splitmix64(splitmix64(parent) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace netbandit
