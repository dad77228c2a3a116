#ifndef MFMC_RNG_HPP
#define MFMC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mfmc {

// SplitMix64 mix; used to derive independent stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(master ^ splitmix64(tag));
}

// mt19937_64 wrapper with fixed-consumption draws: uniform() always consumes
// one engine output, normal() always two, coin() one. This makes kernels
// comparable stream-for-stream (e.g. two-stage M-H vs plain M-H traces).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Open interval (0,1): endpoints never returned, so log(uniform()) is finite.
  double uniform() {
    return (static_cast<double>(raw() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, one variate per call (the paired sine variate is discarded).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  bool coin() { return (raw() & 1ULL) != 0; }

private:
  std::mt19937_64 engine_;
};

}  // namespace mfmc

#endif  // MFMC_RNG_HPP
