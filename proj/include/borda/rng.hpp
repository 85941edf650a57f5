#pragma once

// Deterministic seeded randomness. Every sampling routine in the library
// draws from Rng, a splitmix64 stream. Independent substreams are derived
// from a root seed with mix_seed, so results never depend on the order in
// which (subset, round) cells are visited:
//
//   stream(seed, a, b, ...) = mix_seed(mix_seed(mix_seed(seed, a), b), ...)

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>

namespace borda {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Folds one component into a seed; chain calls to derive nested streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t component) {
  return detail::mix64(seed ^ (component * kGolden + 0xbf58476d1ce4e5b9ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return detail::mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) *
                                       static_cast<unsigned __int128>(n)) >> 64);
  }

  // Standard normal via Box-Muller; two uniforms per draw, no cached spare.
  double next_gaussian() {
    double u1 = 1.0 - next_unit();  // (0, 1]
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Index drawn according to a cumulative-sum table (need not end at 1).
  std::size_t next_categorical(std::span<const double> cumulative) {
    if (cumulative.empty()) throw std::invalid_argument("empty categorical table");
    double u = next_unit() * cumulative.back();
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cumulative[mid] > u) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

 private:
  std::uint64_t state_;
};

}  // namespace borda
