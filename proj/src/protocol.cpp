// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmtlab/dmt.hpp"
#include "dmtlab/stats.hpp"

namespace dmtlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest power p with sum_k log2(1 + p/m lambda_k) >= target.
double required_power(std::span<const double> eig, int m, double target) {
  if (target <= 0.0) return 0.0;
  double lambda_sum = 0.0;
  int nonzero = 0;
  for (double l : eig) {
    if (l > 0.0) {
      lambda_sum += l;
      ++nonzero;
    }
  }
  if (nonzero == 0) return kInf;
  if (nonzero == 1) return m * std::expm1(target * std::log(2.0)) / lambda_sum;
  auto rate_at = [&](double p) {
    double acc = 0.0;
    for (double l : eig) acc += std::log2(1.0 + p / m * std::max(l, 0.0));
    return acc;
  };
  // Bracket: the rank-one bound on the sum is an upper limit for the root.
  double hi = m * std::expm1(target * std::log(2.0)) / lambda_sum;
  hi = std::max(hi, 1e-300);
  while (rate_at(hi) < target) hi *= 2.0;
  double lo = hi;
  while (lo > 1e-300 && rate_at(lo) >= target) lo *= 0.5;
  for (int it = 0; it < 100; ++it) {
    const double mid = std::sqrt(lo * hi);
    (rate_at(mid) >= target ? hi : lo) = mid;
    if (hi <= lo * (1.0 + 1e-13)) break;
  }
  return hi;
}

int level_for(double need, std::span<const double> powers, int empty_index) {
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] >= need) return static_cast<int>(i);
  }
  return empty_index;
}

std::vector<double> target_exponents(Scenario scenario, const MimoConfig& cfg,
                                     int k_levels) {
  std::vector<double> p(k_levels, 0.0);
  if (k_levels < 2) return p;
  if (uses_constant_power_feedback(scenario)) {
    const auto b = dmt::constant_power_ladder(cfg.r, k_levels - 1, cfg.m, cfg.n);
    const double mn = static_cast<double>(cfg.m) * cfg.n;
    for (int i = 0; i < k_levels; ++i) p[i] = std::min(mn, b[i]);
  } else {
    const auto d = dmt::perfect_feedback_ladder(cfg.r, k_levels - 1, cfg.m, cfg.n);
    for (int i = 0; i < k_levels; ++i) p[i] = d[i];
  }
  return p;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Calibration calibrate_power_levels(Scenario scenario, const MimoConfig& cfg,
                                   double snr, std::uint64_t seed) {
  cfg.validate();
  if (!(snr > 1.0)) throw std::invalid_argument("calibration: snr must be > 1");
  Calibration cal;
  const int k_levels = scenario == Scenario::kNoFeedback ? 1 : cfg.k_levels;
  if (scenario == Scenario::kEstCsirNoisyFbPc && k_levels != 2) {
    throw std::invalid_argument("est_csir_noisy_fb_pc requires K = 2");
  }
  if (k_levels == 1) {
    cal.power = make_power_policy(snr, {0.0}, {snr});
    cal.receiver_level_probability = {1.0};
    cal.transmitter_level_probability = {1.0};
    cal.insufficient_probability = {};
    return cal;
  }

  const std::uint64_t pilots = cfg.pilot_trials;
  const double floor_p = 3.0 / static_cast<double>(pilots);
  const bool estimated = uses_estimated_csir(scenario);
  const bool pc_feedback = uses_power_controlled_feedback(scenario);
  const bool const_feedback = uses_constant_power_feedback(scenario);
  const double log2_snr = std::log2(snr);
  const double rate = cfg.r * log2_snr;
  const double target = estimated ? rate + cfg.epsilon * log2_snr : rate;
  const int empty = empty_set_index(scenario, k_levels);

  // Pilot draws: power each draw needs, and the three terms of the feedback
  // energy so that any Q can be replayed on the same noise.
  std::vector<double> need(pilots);
  std::vector<double> fb_gain, fb_noise, fb_cross;
  if (pc_feedback) {
    fb_gain.resize(pilots);
    fb_noise.resize(pilots);
    fb_cross.resize(pilots);
  }
  RandomStream rng(seed, StreamTag::kPilot);
  for (std::uint64_t t = 0; t < pilots; ++t) {
    const ComplexMatrix h = sample_rayleigh(cfg.m, cfg.n, rng);
    std::vector<double> eig;
    if (estimated) {
      eig = gram_eigenvalues(mmse_estimate(h, snr, cfg.n_train, rng).h_hat);
    } else {
      eig = gram_eigenvalues(h);
    }
    need[t] = required_power(eig, cfg.m, target);
    if (pc_feedback) {
      const ComplexMatrix h_f = sample_rayleigh(cfg.n, cfg.m, rng);
      const ComplexMatrix w = sample_rayleigh(cfg.n, cfg.m, rng);
      fb_gain[t] = h_f.squaredNorm();
      fb_noise[t] = w.squaredNorm();
      fb_cross[t] = 2.0 * std::real(h_f.cwiseProduct(w.conjugate()).sum());
    }
  }

  const bool main_protocol = scenario == Scenario::kEstCsirNoisyFbPc;
  std::vector<double> powers(k_levels, kInf);
  powers[0] = snr / (main_protocol ? 2.0 : k_levels);
  std::vector<double> fb_powers(k_levels, 0.0);
  std::vector<double> pi_r(k_levels), pi_t(k_levels), insufficient(k_levels, 0.0);
  std::vector<std::uint64_t> insufficient_count(k_levels, 0);
  const double error_prob =
      const_feedback ? constant_power_error_probability(k_levels, snr, cfg.m, cfg.n,
                                                        cfg.const_fb_c)
                     : 0.0;

  // Level probabilities for the current forward and feedback powers.
  auto evaluate = [&](std::span<const double> fwd) {
    std::fill(pi_r.begin(), pi_r.end(), 0.0);
    std::fill(pi_t.begin(), pi_t.end(), 0.0);
    std::fill(insufficient_count.begin(), insufficient_count.end(), 0);
    std::vector<int> j_r(pilots);
    for (std::uint64_t t = 0; t < pilots; ++t) {
      j_r[t] = level_for(need[t], fwd, empty);
      pi_r[j_r[t]] += 1.0;
      for (int i = 1; i < k_levels; ++i) {
        if (need[t] > fwd[i - 1]) ++insufficient_count[i];
      }
    }
    for (int i = 0; i < k_levels; ++i) {
      pi_r[i] /= pilots;
      insufficient[i] = static_cast<double>(insufficient_count[i]) / pilots;
    }
    if (pc_feedback) {
      // Feedback levels from P(J_R = i); a tail maximum keeps them increasing.
      double tail = 0.0;
      for (int i = k_levels - 1; i >= 1; --i) {
        tail = std::max(tail, pi_r[i]);
        fb_powers[i] = snr / ((main_protocol ? 2.0 : k_levels) * std::max(tail, floor_p));
      }
      for (int i = 2; i < k_levels; ++i) {
        if (fb_powers[i] <= fb_powers[i - 1]) fb_powers[i] = fb_powers[i - 1] * (1.0 + 1e-9);
      }
      const FeedbackPolicy policy = make_feedback_policy(snr, cfg.fb_epsilon, fb_powers);
      for (std::uint64_t t = 0; t < pilots; ++t) {
        const double q = fb_powers[j_r[t]];
        const double energy = q * fb_gain[t] + fb_noise[t] + std::sqrt(q) * fb_cross[t];
        pi_t[detect_index(energy, policy)] += 1.0;
      }
      for (double& v : pi_t) v /= pilots;
    } else if (const_feedback) {
      for (int i = 0; i < k_levels; ++i) {
        for (int j = 0; j < k_levels; ++j) {
          const double move = i == j ? 1.0 - (k_levels - 1) * error_prob : error_prob;
          pi_t[i] += pi_r[j] * move;
        }
      }
    } else {
      pi_t = pi_r;
    }
  };

  // Lowering a level can only push draws upwards, so iterate with monotone
  // (nonincreasing) levels until the construction is self-consistent.
  for (int iter = 0; iter < 64; ++iter) {
    std::vector<double> fwd = powers;
    for (int i = 1; i < k_levels; ++i) {
      if (!std::isfinite(fwd[i])) fwd[i] = kInf;
    }
    evaluate(fwd);
    bool changed = false;
    for (int i = 1; i < k_levels; ++i) {
      double level;
      if (main_protocol) {
        level = snr / (4.0 * std::max({pi_r[1], pi_t[1] / 2.0, floor_p}));
      } else {
        level = snr / (k_levels * std::max({insufficient[i], pi_t[i], floor_p}));
      }
      level = std::max(level, powers[i - 1]);
      if (level < powers[i]) {
        powers[i] = level;
        changed = true;
      }
    }
    if (!changed) break;
  }
  evaluate(powers);

  for (int i = 1; i < k_levels; ++i) {
    if (insufficient_count[i] == 0) cal.degenerate = true;
  }
  cal.power = make_power_policy(snr, target_exponents(scenario, cfg, k_levels), powers);
  if (pc_feedback) cal.feedback = make_feedback_policy(snr, cfg.fb_epsilon, fb_powers);
  cal.receiver_level_probability = pi_r;
  cal.transmitter_level_probability = pi_t;
  cal.insufficient_probability = insufficient;
  cal.pilot_trials = pilots;
  return cal;
}

LinkSimulator::LinkSimulator(Scenario scenario, MimoConfig cfg, double snr,
                             Calibration calibration)
    : scenario_(scenario),
      cfg_(std::move(cfg)),
      snr_(snr),
      rate_(cfg_.r * std::log2(snr)),
      receiver_rate_(rate_ + (uses_estimated_csir(scenario) ? cfg_.epsilon * std::log2(snr) : 0.0)),
      calibration_(std::move(calibration)) {
  cfg_.validate();
  if (uses_power_controlled_feedback(scenario_) && !calibration_.feedback) {
    throw std::invalid_argument("simulator: feedback policy missing");
  }
  const int expected = scenario_ == Scenario::kNoFeedback ? 1 : cfg_.k_levels;
  if (calibration_.power.levels() != expected) {
    throw std::invalid_argument("simulator: calibration does not match K");
  }
}

TrialRecord LinkSimulator::run_trial(RandomStream& rng,
                                     const TrialOverrides& overrides) const {
  TrialRecord rec;
  const int m = cfg_.m;
  const int n = cfg_.n;
  const ComplexMatrix h = sample_rayleigh(m, n, rng);
  if (scenario_ == Scenario::kNoFeedback) {
    rec.fwd_power_used = snr_;
    rec.outage = mutual_information(h, snr_) < rate_;
    return rec;
  }

  const auto& powers = calibration_.power.powers;
  const int k_levels = calibration_.power.levels();
  const bool estimated = uses_estimated_csir(scenario_);
  rec.j_oracle = receiver_index(h, powers, rate_, empty_set_index(scenario_, k_levels));

  // Phase 1: receiver picks its level from H or from its estimate.
  EstimateResult first;
  if (estimated) {
    first = mmse_estimate(h, snr_, cfg_.n_train, rng);
    rec.j_r = receiver_index(first.h_hat, powers, receiver_rate_, k_levels - 1);
  } else {
    rec.j_r = rec.j_oracle;
  }
  if (overrides.j_r >= 0) rec.j_r = overrides.j_r;

  // Phase 2: feedback transport.
  if (uses_power_controlled_feedback(scenario_)) {
    const ComplexMatrix h_f = sample_rayleigh(n, m, rng);
    const FeedbackOutcome fb =
        transmit_feedback_power_controlled(rec.j_r, *calibration_.feedback, h_f, rng);
    rec.j_t = fb.j_t;
    rec.fb_power_used = fb.tx_power;
  } else if (uses_constant_power_feedback(scenario_)) {
    rec.j_t = transmit_feedback_constant_power(rec.j_r, k_levels, snr_, m, n,
                                               cfg_.const_fb_c, rng);
    rec.fb_power_used = snr_;
  } else {
    rec.j_t = rec.j_r;
  }
  if (overrides.j_t >= 0) rec.j_t = overrides.j_t;

  // Phase 3: data at the decoded level, optionally after retraining.
  const double p = powers[rec.j_t];
  rec.fwd_power_used = p;
  if (!estimated) {
    rec.outage = mutual_information(h, p) < rate_;
  } else if (uses_power_controlled_training(scenario_)) {
    const EstimateResult second = mmse_estimate(h, p, cfg_.n_train, rng);
    const ComplexMatrix h_tilde = h - second.h_hat;
    rec.outage = effective_mutual_information(second.h_hat, h_tilde, p, m, n) < rate_;
  } else {
    const ComplexMatrix h_tilde = h - first.h_hat;
    rec.outage = effective_mutual_information(first.h_hat, h_tilde, p, m, n) < rate_;
  }
  return rec;
}

OutageEstimate summarize(const TrialTally& tally, double snr) {
  if (tally.trials == 0) throw std::invalid_argument("summarize: no trials");
  OutageEstimate est;
  est.snr = snr;
  est.snr_db = 10.0 * std::log10(snr);
  est.trials = tally.trials;
  est.outages = tally.outages;
  est.p_hat = static_cast<double>(tally.outages) / tally.trials;
  const auto ci = stats::wilson_interval(tally.outages, tally.trials);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  est.mean_fwd_power = tally.fwd_power / tally.trials;
  est.mean_fb_power = tally.fb_power / tally.trials;
  est.index_up = tally.index_up;
  est.index_down = tally.index_down;
  return est;
}

namespace {

void record(const TrialRecord& rec, TrialTally& tally) {
  ++tally.trials;
  tally.outages += rec.outage ? 1 : 0;
  tally.index_up += rec.j_t > rec.j_r ? 1 : 0;
  tally.index_down += rec.j_t < rec.j_r ? 1 : 0;
  tally.fwd_power += rec.fwd_power_used;
  tally.fb_power += rec.fb_power_used;
}

}  // namespace

OutageEstimate estimate_outage(const LinkSimulator& sim, std::uint64_t trials,
                               std::uint64_t seed, int parallelism) {
  if (trials == 0) throw std::invalid_argument("estimate_outage: trials must be >= 1");
  const TrialTally tally = run_blocks(
      trials, seed, StreamTag::kTrials, parallelism,
      [&sim](RandomStream& rng, std::uint64_t count, TrialTally& t) {
        for (std::uint64_t i = 0; i < count; ++i) record(sim.run_trial(rng), t);
      });
  return summarize(tally, sim.snr());
}

OutageEstimate estimate_outage(
    const std::function<TrialRecord(RandomStream&)>& trial, double snr,
    std::uint64_t trials, std::uint64_t seed, int parallelism, StreamTag tag) {
  if (trials == 0) throw std::invalid_argument("estimate_outage: trials must be >= 1");
  const TrialTally tally = run_blocks(
      trials, seed, tag, parallelism,
      [&trial](RandomStream& rng, std::uint64_t count, TrialTally& t) {
        for (std::uint64_t i = 0; i < count; ++i) record(trial(rng), t);
      });
  return summarize(tally, snr);
}

SlopeEstimate estimate_diversity_slope(std::span<const OutageEstimate> points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit: need at least 3 points");
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (p.outages < kMinFitOutages || !(p.p_hat > 0.0)) {
      throw std::invalid_argument("slope fit: every point needs at least 10 outages");
    }
    if (!(p.snr > 1.0)) throw std::invalid_argument("slope fit: snr must be > 1");
    x.push_back(std::log10(p.snr));
    y.push_back(-std::log10(p.p_hat));
  }
  const auto fit = stats::fit_line(x, y);
  return {fit.slope, fit.slope_stderr};
}

double analytic_diversity(Scenario scenario, const MimoConfig& cfg) {
  const double r = cfg.r;
  const int m = cfg.m, n = cfg.n, k = cfg.k_levels;
  if (r >= std::min(m, n)) return 0.0;
  const double no_fb = dmt::g_tradeoff(r, 1.0, m, n);
  if (scenario == Scenario::kNoFeedback || k == 1) return no_fb;
  switch (scenario) {
    case Scenario::kPerfectCsirNoiselessFb: return dmt::d_perfect_feedback(r, k, m, n);
    case Scenario::kPerfectCsirNoisyFbConst: return dmt::d_constant_power_feedback(r, k, m, n);
    case Scenario::kPerfectCsirNoisyFbPc: return dmt::d_power_controlled_feedback(r, k, m, n).diversity;
    case Scenario::kEstCsirNoiselessFbConstTrain: return dmt::d_training(r, m, n, false);
    case Scenario::kEstCsirNoiselessFbPcTrain:
    case Scenario::kEstCsirNoisyFbPc: return dmt::d_training(r, m, n, true);
    case Scenario::kNoFeedback: break;
  }
  return no_fb;
}

}  // namespace dmtlab
