#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace catdcov {

using Seed = std::uint64_t;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Stable mixing of a master seed with a path of indices (replicate, feature,
/// stage, ...). Equal paths give equal seeds on every platform.
constexpr Seed derive_seed(Seed master, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = detail::splitmix64(master);
  for (std::uint64_t p : path) h = detail::splitmix64(h ^ detail::splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

/// Owned pseudo-random stream. Never shared between workers; parallel code
/// derives one per task index with derive_seed.
class RandomStream {
 public:
  explicit RandomStream(Seed seed) : engine_(seed) {}

  static RandomStream derive(Seed master, std::initializer_list<std::uint64_t> path) {
    return RandomStream(derive_seed(master, path));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace catdcov
