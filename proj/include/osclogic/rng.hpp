#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace osclogic {

// Single source of randomness. Every stochastic choice (tie-breaking phase
// perturbations, Liapunov seed points) draws from one seeded stream so runs
// are reproducible byte-for-byte. The uniform mapping avoids
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // n independent draws in [-magnitude, magnitude]
  std::vector<double> perturbations(int n, double magnitude) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = uniform(-magnitude, magnitude);
    return out;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace osclogic
