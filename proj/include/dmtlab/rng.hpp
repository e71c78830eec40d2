// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace dmtlab {

/// Stream identifiers mixed into every seed so that pilot runs, trial runs and
/// exponent sweeps never share random numbers for the same master seed.
enum class StreamTag : std::uint32_t {
  kPilot = 1,
  kTrials = 2,
  kExponents = 3,
  kMac = 4,
  kMacPilot = 5,
  kTest = 99,
};

/// Deterministic random stream. Every stream is fully determined by
/// (master seed, tag, block index); blocks are the unit handed to worker
/// threads, so results never depend on the number of threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamTag tag, std::uint64_t block = 0);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Circularly-symmetric complex Gaussian with unit total variance.
  std::complex<double> complex_normal() {
    constexpr double kHalfSqrt = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kHalfSqrt * re, kHalfSqrt * im};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Mixes a master seed with two small indices (splitmix64 finalizer), used to
/// give every (scenario, SNR point) pair its own independent stream family.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace dmtlab
