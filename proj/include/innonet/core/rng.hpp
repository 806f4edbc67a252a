#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace innonet {

/// SplitMix64 finalizer. Used both to derive stream seeds and as a
/// counter-based hash for per-pair uniforms.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds any number of 64-bit keys into one seed.
template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h ^ (static_cast<std::uint64_t>(keys) + 0x632be59bd9b4e019ULL))), ...);
  return h;
}

/// Maps 64 random bits to [0, 1) with 53 bits of resolution.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based uniform in [0, 1) keyed by arbitrary integers.
template <typename... Keys>
constexpr double hash_unit(std::uint64_t seed, Keys... keys) noexcept {
  return to_unit(derive_seed(seed, keys...));
}

/// xoshiro256**. Cheap to seed, so every (replication, learner) pair can own
/// its stream. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept {
    for (auto& word : state_) {
      seed = mix64(seed);
      word = seed;
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  double uniform() noexcept { return to_unit((*this)()); }

  /// Uniform in (0, 1], safe for logarithms.
  double uniform_pos() noexcept { return 1.0 - uniform(); }

  /// Number of failures before the first success of a Bernoulli(prob) sequence.
  /// `log_q` must be log1p(-prob) for prob in (0, 1).
  std::uint64_t geometric_skip(double log_q) noexcept {
    const double g = std::floor(std::log(uniform_pos()) / log_q);
    return g >= 1e18 ? std::numeric_limits<std::uint64_t>::max() / 2
                     : static_cast<std::uint64_t>(g);
  }

  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) %
           bound;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

/// Stream tags; keep them distinct so streams never alias.
namespace stream {
inline constexpr std::uint64_t kDiscovery = 0x11;
inline constexpr std::uint64_t kArcs = 0x22;
inline constexpr std::uint64_t kPairPresence = 0x33;
inline constexpr std::uint64_t kPairIndirect = 0x34;
inline constexpr std::uint64_t kDeviatorIn = 0x44;
inline constexpr std::uint64_t kDeviatorInFlag = 0x45;
inline constexpr std::uint64_t kDeviatorOut = 0x46;
inline constexpr std::uint64_t kDeviatorOutFlag = 0x47;
inline constexpr std::uint64_t kSampling = 0x55;
inline constexpr std::uint64_t kTau = 0x66;
inline constexpr std::uint64_t kPopulation = 0x77;
}  // namespace stream

}  // namespace innonet
