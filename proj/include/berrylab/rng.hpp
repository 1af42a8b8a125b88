#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace berrylab {

/// Engine used for every sampler in the library. The standard library fixes
/// its output sequence, so samples replay bit-identically for a given seed.
using Engine = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed-splitting rule: folds the stream path into the master seed one
/// component at a time, seed <- mix64(seed ^ mix64(component + golden)).
/// Independent draws of an experiment use paths (stream tag, index, ...).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Stream tags for derive_seed. Values are part of the replay contract.
namespace stream {
inline constexpr std::uint64_t kBasePoints = 0x62617365;    // "base"
inline constexpr std::uint64_t kBerry = 0x62657272;         // "berr"
inline constexpr std::uint64_t kCoefficients = 0x636f6566;  // "coef"
inline constexpr std::uint64_t kPairs = 0x70616972;         // "pair"
inline constexpr std::uint64_t kSearch = 0x73726368;        // "srch"
}  // namespace stream

}  // namespace berrylab
