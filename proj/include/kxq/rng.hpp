#pragma once

#include <cstdint>
#include <limits>

namespace kxq {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Maps 64 random bits onto [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Independent purposes a stream may serve. Mixed into every key so two
/// phases never share draws even with the same seed and index.
enum class Phase : std::uint64_t {
  graph = 1,
  distribution = 2,
  rejection = 3,
  failure = 4,
  response = 5,
  rollout = 6,
  random_method = 7,
  bootstrap = 8,
  high_risk = 9,
};

/// Counter-based stream keyed by (seed, phase, index). A draw is a pure
/// function of the key and a counter (typically an edge id), so the draw for
/// one edge does not move when other edges join or leave a query set.
class CounterStream {
 public:
  constexpr CounterStream(std::uint64_t seed, Phase phase, std::uint64_t index = 0) noexcept
      : key_(mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(phase)) ^ index)) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix64(key_ ^ mix64(counter + 0x632be59bd9b4e019ULL));
  }
  constexpr double uniform(std::uint64_t counter) const noexcept { return to_unit(bits(counter)); }

  /// Derived stream, e.g. one per scenario of a parent stream.
  constexpr CounterStream child(std::uint64_t index) const noexcept {
    return CounterStream(key_, index);
  }

 private:
  constexpr CounterStream(std::uint64_t key, std::uint64_t index) noexcept
      : key_(mix64(key ^ mix64(index ^ 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t key_;
};

/// Sequential SplitMix64 generator for search rollouts and resampling.
/// Meets UniformRandomBitGenerator; `below` and `uniform` avoid the
/// implementation-defined std distributions so output is portable.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr SplitMix64(std::uint64_t seed, Phase phase, std::uint64_t index = 0) noexcept
      : state_(CounterStream(seed, phase, index).bits(0)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr double uniform() noexcept { return to_unit((*this)()); }

  /// Uniform integer in [0, n); n must be positive.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    const auto product = static_cast<unsigned __int128>((*this)()) * n;
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace kxq
