#ifndef BTRATE_RANDOM_HPP_
#define BTRATE_RANDOM_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace btrate {

/// SplitMix64 step; used to expand seeds and derive independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seeded 64-bit generator: std::mt19937_64 whose state is filled from a
/// SplitMix64 expansion of the seed. `stream(seed, k)` derives the k-th
/// independent stream; stream 0 is the single-shard reference.
///
/// Uniform and exponential variates are produced from raw engine bits by
/// this class, so they are identical on every platform. Binomial variates
/// use std::binomial_distribution and are stable for a given standard
/// library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t state = seed;
    std::array<std::uint32_t, 16> words{};
    for (std::size_t i = 0; i < words.size(); i += 2) {
      const std::uint64_t v = splitmix64(state);
      words[i] = static_cast<std::uint32_t>(v);
      words[i + 1] = static_cast<std::uint32_t>(v >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    if (index == 0) return Rng(seed);
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * index);
    return Rng(splitmix64(state));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential variate with the given mean, by inversion.
  double exponential(double mean) { return -mean * std::log(uniform_open()); }

  bool bernoulli(double p) { return uniform_open() < p; }

  std::uint64_t binomial(std::uint64_t trials, double p) {
    if (trials == 0) return 0;
    std::binomial_distribution<std::uint64_t> dist(trials, p);
    return dist(*this);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace btrate

#endif  // BTRATE_RANDOM_HPP_
