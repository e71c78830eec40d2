// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dmtlab/channel.hpp"
#include "dmtlab/config.hpp"
#include "dmtlab/feedback.hpp"
#include "dmtlab/protocol.hpp"

namespace dmtlab {

/// log2 det(I + sum_{i in S} (p_i/m) H_i H_i^H / inflation) for the users
/// selected by `mask` (bit i = user i).
double subset_mutual_information(std::span<const ComplexMatrix> h_set,
                                 std::span<const double> p_vec,
                                 std::uint32_t mask, double inflation = 1.0);

/// True iff some nonempty subset S has mutual information below
/// sum_{i in S} rate_bits[i]. Rates are in bits per channel use.
bool union_outage(std::span<const ComplexMatrix> h_set,
                  std::span<const double> rate_bits,
                  std::span<const double> p_vec, double inflation = 1.0);

/// Union outage at per-user multiplexing gains r_vec: rates r_i log2 snr.
bool union_outage_check(std::span<const ComplexMatrix> h_set,
                        std::span<const double> r_vec,
                        std::span<const double> p_vec, double snr);

struct MacTrialRecord {
  int j_r = 0;
  std::vector<int> j_t;
  bool outage = false;
  std::vector<double> powers;  // per-user forward power used
  double fb_power = 0.0;       // common feedback burst power
};

struct MacCalibration {
  PowerPolicy power;        // P_0 = SNR/2, P_1 from the pilot
  FeedbackPolicy feedback;  // Q_0 = 0, Q_1 from the pilot
  double receiver_high_probability = 0.0;     // P(J_R = 1)
  double transmitter_high_probability = 0.0;  // max over users of P(J_Ti = 1)
  std::uint64_t pilot_trials = 0;
  bool degenerate = false;
};

MacCalibration calibrate_mac(const MimoConfig& cfg, double snr,
                             std::uint64_t seed);

struct MacOverrides {
  int j_r = -1;
  std::vector<int> j_t;  // empty: no override; otherwise one entry per user
  bool identical_noiseless_feedback = false;
};

class MacSimulator {
 public:
  MacSimulator(MimoConfig cfg, double snr, MacCalibration calibration);

  MacTrialRecord run_trial(RandomStream& rng, const MacOverrides& overrides = {}) const;

  double snr() const { return snr_; }
  const MimoConfig& config() const { return cfg_; }
  const MacCalibration& calibration() const { return calibration_; }

 private:
  MimoConfig cfg_;
  double snr_;
  std::vector<double> rates_;           // r_i log2 snr
  std::vector<double> receiver_rates_;  // with the eps log2 snr margin
  MacCalibration calibration_;
};

/// Mean forward power is averaged over users.
OutageEstimate estimate_mac_outage(const MacSimulator& sim, std::uint64_t trials,
                                   std::uint64_t seed, int parallelism);

}  // namespace dmtlab
