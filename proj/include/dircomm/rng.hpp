#pragma once

#include <concepts>
#include <cstdint>
#include <random>

namespace dircomm {

/// Seeded 64-bit Mersenne Twister. Same seed and same call sequence give the
/// same draws within one build; the seed is kept so outputs can record it.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

template <std::uniform_random_bit_generator G>
double uniform01(G& gen) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(gen);
}

// Uniform integer in [0, n), n > 0.
template <std::unsigned_integral Int, std::uniform_random_bit_generator G>
Int uniform_below(G& gen, Int n) {
  return std::uniform_int_distribution<Int>(0, n - 1)(gen);
}

template <std::uniform_random_bit_generator G>
bool bernoulli(G& gen, double p) {
  return uniform01(gen) < p;
}

}  // namespace dircomm
