#pragma once

#include <cstdint>
#include <random>

namespace nsmab {

// Seeded generator with all derived distributions implemented in-house,
// so the draw sequence for a given seed is identical on every platform
// (std::*_distribution output is implementation-defined).
//
// Draw costs per call: next_double 1 engine step, next_normal 2 steps,
// next_gamma a small rejection loop, next_beta two gamma draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller (no caching, fixed two draws per call).
  double next_normal();

  // Gamma(shape, scale 1) via Marsaglia-Tsang; shape < 1 handled by boosting.
  double next_gamma(double shape);

  double next_beta(double alpha, double beta);

 private:
  std::mt19937_64 engine_;
};

}  // namespace nsmab
