// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/mac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dmtlab/dmt.hpp"
#include "dmtlab/montecarlo.hpp"

namespace dmtlab {
namespace {

void check_users(std::span<const ComplexMatrix> h_set, std::size_t count) {
  if (h_set.empty()) throw std::invalid_argument("mac: no users");
  if (h_set.size() > 16) throw std::invalid_argument("mac: too many users");
  if (count != h_set.size()) throw std::invalid_argument("mac: per-user size mismatch");
  for (const auto& h : h_set) {
    if (h.rows() != h_set.front().rows() || h.cols() != h_set.front().cols()) {
      throw std::invalid_argument("mac: inconsistent channel dimensions");
    }
  }
}

}  // namespace

double subset_mutual_information(std::span<const ComplexMatrix> h_set,
                                 std::span<const double> p_vec,
                                 std::uint32_t mask, double inflation) {
  check_users(h_set, p_vec.size());
  const Eigen::Index n = h_set.front().rows();
  const Eigen::Index m = h_set.front().cols();
  int users = 0;
  for (std::size_t i = 0; i < h_set.size(); ++i) users += (mask >> i) & 1u;
  if (users == 0) return 0.0;
  if (users * m > kMaxDim) throw std::invalid_argument("mac: subset too large");
  ComplexMatrix stacked(n, users * m);
  int col = 0;
  for (std::size_t i = 0; i < h_set.size(); ++i) {
    if (!((mask >> i) & 1u)) continue;
    const double scale = std::sqrt(p_vec[i] / (m * inflation));
    stacked.middleCols(col, m) = scale * h_set[i];
    col += static_cast<int>(m);
  }
  // mutual_information divides its power by the column count.
  return mutual_information(stacked, static_cast<double>(stacked.cols()));
}

bool union_outage(std::span<const ComplexMatrix> h_set,
                  std::span<const double> rate_bits,
                  std::span<const double> p_vec, double inflation) {
  check_users(h_set, rate_bits.size());
  check_users(h_set, p_vec.size());
  const std::uint32_t full = (1u << h_set.size()) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double rate = 0.0;
    for (std::size_t i = 0; i < h_set.size(); ++i) {
      if ((mask >> i) & 1u) rate += rate_bits[i];
    }
    if (subset_mutual_information(h_set, p_vec, mask, inflation) < rate) return true;
  }
  return false;
}

bool union_outage_check(std::span<const ComplexMatrix> h_set,
                        std::span<const double> r_vec,
                        std::span<const double> p_vec, double snr) {
  if (!(snr > 1.0)) throw std::invalid_argument("mac: snr must be > 1");
  std::vector<double> rates(r_vec.begin(), r_vec.end());
  for (double& r : rates) r *= std::log2(snr);
  return union_outage(h_set, rates, p_vec);
}

MacCalibration calibrate_mac(const MimoConfig& cfg, double snr,
                             std::uint64_t seed) {
  cfg.validate();
  if (cfg.k_levels != 2) throw std::invalid_argument("mac protocol requires K = 2");
  if (!(snr > 1.0)) throw std::invalid_argument("mac: snr must be > 1");
  const int users = cfg.l_users;
  const std::uint64_t pilots = cfg.pilot_trials;
  const double floor_p = 3.0 / static_cast<double>(pilots);
  const double log2_snr = std::log2(snr);
  std::vector<double> receiver_rates = cfg.user_rates();
  for (double& r : receiver_rates) r = (r + cfg.epsilon) * log2_snr;
  const double p0 = snr / 2.0;
  const std::vector<double> p0_vec(users, p0);

  std::vector<char> high(pilots, 0);
  std::vector<double> gain(pilots * users), noise(pilots * users), cross(pilots * users);
  std::vector<ComplexMatrix> est(users);
  RandomStream rng(seed, StreamTag::kMacPilot);
  std::uint64_t high_count = 0;
  for (std::uint64_t t = 0; t < pilots; ++t) {
    for (int u = 0; u < users; ++u) {
      const ComplexMatrix h = sample_rayleigh(cfg.m, cfg.n, rng);
      est[u] = mmse_estimate(h, snr, cfg.n_train, rng).h_hat;
    }
    high[t] = union_outage(est, receiver_rates, p0_vec) ? 1 : 0;
    high_count += high[t];
    for (int u = 0; u < users; ++u) {
      const ComplexMatrix h_f = sample_rayleigh(cfg.n, cfg.m, rng);
      const ComplexMatrix w = sample_rayleigh(cfg.n, cfg.m, rng);
      const std::size_t idx = t * users + u;
      gain[idx] = h_f.squaredNorm();
      noise[idx] = w.squaredNorm();
      cross[idx] = 2.0 * std::real(h_f.cwiseProduct(w.conjugate()).sum());
    }
  }

  MacCalibration cal;
  cal.pilot_trials = pilots;
  cal.receiver_high_probability = static_cast<double>(high_count) / pilots;
  cal.degenerate = high_count == 0;
  const double q1 = snr / (2.0 * std::max(cal.receiver_high_probability, floor_p));
  cal.feedback = make_feedback_policy(snr, cfg.fb_epsilon, {0.0, q1});

  double worst_user = 0.0;
  for (int u = 0; u < users; ++u) {
    std::uint64_t decoded_high = 0;
    for (std::uint64_t t = 0; t < pilots; ++t) {
      const std::size_t idx = t * users + u;
      const double q = high[t] ? q1 : 0.0;
      const double energy = q * gain[idx] + noise[idx] + std::sqrt(q) * cross[idx];
      decoded_high += detect_index(energy, cal.feedback) == 1 ? 1 : 0;
    }
    worst_user = std::max(worst_user, static_cast<double>(decoded_high) / pilots);
  }
  cal.transmitter_high_probability = worst_user;
  double p1 = snr / (4.0 * std::max({cal.receiver_high_probability, worst_user / 2.0, floor_p}));
  p1 = std::max(p1, p0);
  const auto r_vec = cfg.user_rates();
  const std::vector<double> exps{0.0, dmt::mac_tradeoff(r_vec, 1.0, cfg.m, cfg.n).diversity};
  cal.power = make_power_policy(snr, exps, {p0, p1});
  return cal;
}

MacSimulator::MacSimulator(MimoConfig cfg, double snr, MacCalibration calibration)
    : cfg_(std::move(cfg)), snr_(snr), calibration_(std::move(calibration)) {
  cfg_.validate();
  if (calibration_.power.levels() != 2 || calibration_.feedback.levels() != 2) {
    throw std::invalid_argument("mac simulator: calibration must have two levels");
  }
  const double log2_snr = std::log2(snr_);
  for (double r : cfg_.user_rates()) {
    rates_.push_back(r * log2_snr);
    receiver_rates_.push_back((r + cfg_.epsilon) * log2_snr);
  }
}

MacTrialRecord MacSimulator::run_trial(RandomStream& rng,
                                       const MacOverrides& overrides) const {
  const int users = cfg_.l_users;
  const int m = cfg_.m;
  const int n = cfg_.n;
  const auto& powers = calibration_.power.powers;
  std::vector<ComplexMatrix> h(users), est(users);

  // Phase 1: every user trains at SNR; the receiver asks for the high level
  // when its estimates fail the union test at P_0 with the margin.
  for (int u = 0; u < users; ++u) {
    h[u] = sample_rayleigh(m, n, rng);
    est[u] = mmse_estimate(h[u], snr_, cfg_.n_train, rng).h_hat;
  }
  MacTrialRecord rec;
  const std::vector<double> p0(users, powers[0]);
  rec.j_r = union_outage(est, receiver_rates_, p0) ? 1 : 0;
  if (overrides.j_r >= 0) rec.j_r = overrides.j_r;

  // Phase 2: one broadcast burst, decoded independently by each user.
  rec.fb_power = calibration_.feedback.powers[rec.j_r];
  rec.j_t.resize(users);
  for (int u = 0; u < users; ++u) {
    const ComplexMatrix h_f = sample_rayleigh(n, m, rng);
    const FeedbackOutcome fb =
        transmit_feedback_power_controlled(rec.j_r, calibration_.feedback, h_f, rng);
    rec.j_t[u] = overrides.identical_noiseless_feedback ? rec.j_r : fb.j_t;
  }
  if (!overrides.j_t.empty()) {
    if (static_cast<int>(overrides.j_t.size()) != users) {
      throw std::invalid_argument("mac: override needs one index per user");
    }
    rec.j_t = overrides.j_t;
  }

  // Phase 3: each user retrains at its own decoded level; the summed
  // estimation error of all users is folded into one noise inflation.
  rec.powers.resize(users);
  std::vector<ComplexMatrix> est2(users);
  double interference = 0.0;
  for (int u = 0; u < users; ++u) {
    rec.powers[u] = powers[rec.j_t[u]];
    est2[u] = mmse_estimate(h[u], rec.powers[u], cfg_.n_train, rng).h_hat;
    interference += rec.powers[u] / (static_cast<double>(m) * n) *
                    (h[u] - est2[u]).squaredNorm();
  }
  rec.outage = union_outage(est2, rates_, rec.powers, 1.0 + interference);
  return rec;
}

OutageEstimate estimate_mac_outage(const MacSimulator& sim, std::uint64_t trials,
                                   std::uint64_t seed, int parallelism) {
  if (trials == 0) throw std::invalid_argument("mac: trials must be >= 1");
  const int users = sim.config().l_users;
  const TrialTally tally = run_blocks(
      trials, seed, StreamTag::kMac, parallelism,
      [&](RandomStream& rng, std::uint64_t count, TrialTally& t) {
        for (std::uint64_t i = 0; i < count; ++i) {
          const MacTrialRecord rec = sim.run_trial(rng);
          ++t.trials;
          t.outages += rec.outage ? 1 : 0;
          double total = 0.0;
          for (int u = 0; u < users; ++u) {
            total += rec.powers[u];
            t.index_up += rec.j_t[u] > rec.j_r ? 1 : 0;
            t.index_down += rec.j_t[u] < rec.j_r ? 1 : 0;
          }
          t.fwd_power += total / users;
          t.fb_power += rec.fb_power;
        }
      });
  return summarize(tally, sim.snr());
}

}  // namespace dmtlab
