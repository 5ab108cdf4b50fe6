#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace fedscreen {

// Mixes a base seed with a stream index (SplitMix64 finalizer) so that
// independent consumers (epochs, trees, clients) get decorrelated streams
// from one user-facing seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Seeded generator with portable bounded sampling. std::mt19937_64's output
// sequence is fixed by the standard; the standard distributions are not, so
// we do not use them.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fedscreen
