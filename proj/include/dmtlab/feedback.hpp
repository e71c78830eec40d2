// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <span>
#include <vector>

#include "dmtlab/channel.hpp"
#include "dmtlab/rng.hpp"

namespace dmtlab {

/// Forward power levels P_i = c_i SNR^(1 + p_i). The exponents are the
/// asymptotic targets, the scales absorb whatever the finite-SNR calibration
/// produced, so `powers` is always the ground truth.
struct PowerPolicy {
  double snr = 1.0;
  std::vector<double> exponents;
  std::vector<double> scales;
  std::vector<double> powers;

  int levels() const { return static_cast<int>(powers.size()); }
};

/// Builds a policy from realized powers and target exponents. Powers must be
/// positive and nondecreasing.
PowerPolicy make_power_policy(double snr, std::vector<double> exponents,
                              std::vector<double> powers);

/// Energy-detection feedback: index i is sent at power Q_i, the transmitter
/// compares the received energy against K-1 thresholds SNR^(max(q_i,0)+eps).
struct FeedbackPolicy {
  double snr = 1.0;
  double epsilon = 0.0;
  std::vector<double> powers;      // Q_0 .. Q_{K-1}, linear
  std::vector<double> exponents;   // q_i = log Q_i / log SNR (-inf for Q_i = 0)
  std::vector<double> thresholds;  // K-1 increasing levels

  int levels() const { return static_cast<int>(powers.size()); }
};

FeedbackPolicy make_feedback_policy(double snr, double epsilon,
                                    std::vector<double> powers);

struct FeedbackOutcome {
  int j_r = 0;
  int j_t = 0;
  double energy = 0.0;
  double tx_power = 0.0;
};

/// Smallest level whose mutual information reaches `rate`, else `empty_index`.
int receiver_index(const ComplexMatrix& h, std::span<const double> powers,
                   double rate, int empty_index);

/// Perfect CSIR: empty set maps to level 0.
int receiver_index_perfect_csir(const ComplexMatrix& h,
                                const PowerPolicy& powers, double rate);

/// Estimated CSIR: target rate + eps log2(snr); empty set maps to level K-1.
int receiver_index_estimated_csir(const ComplexMatrix& h_hat,
                                  const PowerPolicy& powers, double rate,
                                  double epsilon, double snr);

/// Number of thresholds strictly below the received energy.
int detect_index(double energy, const FeedbackPolicy& policy);

/// Received energy of the feedback burst for index power q over the m x n
/// reverse channel h_f with noise w: || sqrt(q) h_f + w ||_F^2.
double feedback_energy(const ComplexMatrix& h_f, const ComplexMatrix& w,
                       double q);

/// The receiver spreads Q_{j_r} over its n antennas for n channel uses
/// (identity space-time pattern), so the transmitter sees all m n reverse
/// paths. h_f is m x n; the noise is drawn from rng.
FeedbackOutcome transmit_feedback_power_controlled(int j_r,
                                                   const FeedbackPolicy& policy,
                                                   const ComplexMatrix& h_f,
                                                   RandomStream& rng);

/// Per-index error probability of the constant-power feedback model,
/// c snr^(-mn), capped at 1/K.
double constant_power_error_probability(int k_levels, double snr, int m, int n,
                                        double c);

/// Symmetric error channel: each wrong index with the probability above.
int transmit_feedback_constant_power(int j_r, int k_levels, double snr, int m,
                                     int n, double c, RandomStream& rng);

}  // namespace dmtlab
