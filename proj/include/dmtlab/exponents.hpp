// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmtlab/channel.hpp"
#include "dmtlab/rng.hpp"

namespace dmtlab {

struct JointExponentSample {
  ExponentVector alpha;      // true channel, descending
  ExponentVector alpha_hat;  // MMSE estimate trained at snr, descending
  double snr = 0.0;
  double rho = 0.0;
};

JointExponentSample joint_exponents(const ComplexMatrix& h, double snr,
                                    int n_train, RandomStream& rng);

/// Draws `trials` channels, estimates each at power snr and returns the
/// exponent pairs.
std::vector<JointExponentSample> sample_joint_exponents(int m, int n, double snr,
                                                        int n_train,
                                                        std::uint64_t trials,
                                                        RandomStream& rng);

inline constexpr int kBoundaryClass = -1;

/// Largest k for which pairs 1..k satisfy min(alpha, alpha_hat) >= 1 - delta
/// and the remaining pairs satisfy -delta < alpha < 1 + delta with
/// |alpha - alpha_hat| < delta. Returns kBoundaryClass when no k fits.
int classify_event(const JointExponentSample& sample, double delta);

/// Box in exponent space inside one class: pairs 1..k have both exponents in
/// [a_lo, a_hi]; pairs k+1.. have the true exponent in [b_lo, b_hi] and the
/// estimated exponent within delta of it.
struct ExponentRegion {
  int k = 0;
  double a_lo = 1.0, a_hi = 1.2;
  double b_lo = 0.0, b_hi = 0.5;
  std::string label;
};

/// Parses "k:a_lo:a_hi:b_lo:b_hi". Throws std::invalid_argument on a malformed
/// region or one that straddles classes for the given dimensions.
ExponentRegion parse_region(std::string_view text, int m, int n);

void validate_region(const ExponentRegion& region, int m, int n);

bool region_contains(const ExponentRegion& region,
                     const JointExponentSample& sample, double delta);

/// Smallest value of the class density exponent over the region, by grid
/// search at step 0.01.
double predicted_region_exponent(const ExponentRegion& region, int m, int n);

struct RegionPoint {
  double snr_db = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct RegionSweep {
  std::vector<RegionPoint> points;
  double slope = 0.0;        // NaN when fewer than 3 usable points
  double slope_stderr = 0.0;
  double predicted = 0.0;
};

RegionSweep empirical_event_exponent(int m, int n, int n_train,
                                     std::span<const double> snr_db,
                                     const ExponentRegion& region,
                                     std::uint64_t trials_per_snr,
                                     std::uint64_t seed, int parallelism,
                                     double delta);

/// Counts per class at one SNR; index k holds class k, the last entry holds
/// boundary samples.
std::vector<std::uint64_t> class_histogram(int m, int n, int n_train, double snr,
                                           std::uint64_t trials,
                                           std::uint64_t seed, int parallelism,
                                           double delta);

struct PairingStats {
  std::uint64_t eligible = 0;  // all true exponents below the cut
  std::uint64_t paired = 0;    // of those, max |alpha - alpha_hat| < tolerance
};

PairingStats noise_floor_pairing(int m, int n, int n_train, double snr,
                                 std::uint64_t trials, std::uint64_t seed,
                                 int parallelism, double cut = 0.9,
                                 double tolerance = 0.1);

}  // namespace dmtlab
