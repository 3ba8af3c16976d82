#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace patg {

// Deterministic random source. All sampling goes through explicit helper
// methods (no std distributions) so that streams are reproducible bit for
// bit and the engine state can be captured in checkpoints.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 bits of resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Integer in [0, n). n must be positive.
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  // Standard normal via Box-Muller. Consumes two uniforms per sample and
  // keeps no hidden state, which keeps checkpoint restore exact.
  double gaussian();

  std::string state() const;
  void restore(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

}  // namespace patg
