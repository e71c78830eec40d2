// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dmtlab/config.hpp"
#include "dmtlab/feedback.hpp"
#include "dmtlab/montecarlo.hpp"
#include "dmtlab/scenario.hpp"

namespace dmtlab {

struct TrialRecord {
  int j_oracle = 0;  // level chosen from the true channel at rate R
  int j_r = 0;
  int j_t = 0;
  bool outage = false;
  double fwd_power_used = 0.0;
  double fb_power_used = 0.0;
};

struct OutageEstimate {
  double snr_db = 0.0;
  double snr = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_fwd_power = 0.0;
  double mean_fb_power = 0.0;
  std::uint64_t index_up = 0;
  std::uint64_t index_down = 0;
};

/// Result of the pilot run: forward levels, optional feedback levels and the
/// level probabilities they were derived from.
struct Calibration {
  PowerPolicy power;
  std::optional<FeedbackPolicy> feedback;
  std::vector<double> receiver_level_probability;     // P(J_R = i)
  std::vector<double> transmitter_level_probability;  // P(J_T = i)
  std::vector<double> insufficient_probability;       // P(level i-1 fails), i >= 1
  std::uint64_t pilot_trials = 0;
  bool degenerate = false;  // a required level never occurred in the pilot
};

double db_to_linear(double db);

/// Pilot Monte Carlo followed by the level construction for the scenario.
/// Uses its own random stream, so the trial stream is untouched.
Calibration calibrate_power_levels(Scenario scenario, const MimoConfig& cfg,
                                   double snr, std::uint64_t seed);

/// Optional overrides for the indices of a single trial.
struct TrialOverrides {
  int j_r = -1;
  int j_t = -1;
};

class LinkSimulator {
 public:
  LinkSimulator(Scenario scenario, MimoConfig cfg, double snr,
                Calibration calibration);

  TrialRecord run_trial(RandomStream& rng,
                        const TrialOverrides& overrides = {}) const;

  Scenario scenario() const { return scenario_; }
  const MimoConfig& config() const { return cfg_; }
  double snr() const { return snr_; }
  double rate() const { return rate_; }
  const Calibration& calibration() const { return calibration_; }

 private:
  Scenario scenario_;
  MimoConfig cfg_;
  double snr_;
  double rate_;
  double receiver_rate_;
  Calibration calibration_;
};

/// Builds an OutageEstimate from a tally.
OutageEstimate summarize(const TrialTally& tally, double snr);

OutageEstimate estimate_outage(const LinkSimulator& sim, std::uint64_t trials,
                               std::uint64_t seed, int parallelism);

/// Same engine for an arbitrary trial generator.
OutageEstimate estimate_outage(
    const std::function<TrialRecord(RandomStream&)>& trial, double snr,
    std::uint64_t trials, std::uint64_t seed, int parallelism,
    StreamTag tag = StreamTag::kTrials);

struct SlopeEstimate {
  double slope = 0.0;
  double stderr_ = 0.0;
};

/// Least-squares slope of -log10 p_hat against log10 snr. Needs at least three
/// points with at least ten outages each.
SlopeEstimate estimate_diversity_slope(std::span<const OutageEstimate> points);

/// Minimum outage count for a point to enter the slope fit.
inline constexpr std::uint64_t kMinFitOutages = 10;

/// Asymptotic diversity of a scenario at (r, K), used for reporting.
double analytic_diversity(Scenario scenario, const MimoConfig& cfg);

}  // namespace dmtlab
