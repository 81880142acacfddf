#ifndef FLOWDEP_RNG_HPP
#define FLOWDEP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace flowdep {

// Stateless mixer used to derive independent per-chunk seed streams from one
// user-visible seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded generator with explicit uniform/normal draws. All values are derived
// from raw mt19937_64 output so sequences do not depend on standard-library
// distribution internals and are reproducible per seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }

  // (0, 1], safe as a log argument
  double uniform01_positive() { return (double(gen_() >> 11) + 1.0) * 0x1.0p-53; }

  // Box-Muller; two independent standard normals per call.
  std::pair<double, double> normal_pair() {
    const double u1 = uniform01_positive();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  // Pareto with tail index 1: P(X > x) = 1/x for x >= 1.
  double pareto1() { return 1.0 / uniform01_positive(); }

  // Unbiased draw from {0, ..., bound-1} by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Fisher-Yates with Rng::below, so shuffles are identical on every platform.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = std::size_t(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace flowdep

#endif
