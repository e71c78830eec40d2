// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dmtlab {

PowerPolicy make_power_policy(double snr, std::vector<double> exponents,
                              std::vector<double> powers) {
  if (!(snr > 1.0)) throw std::invalid_argument("power policy: snr must be > 1");
  if (powers.empty() || exponents.size() != powers.size()) {
    throw std::invalid_argument("power policy: exponent/power size mismatch");
  }
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (!(powers[i] > 0.0) || !std::isfinite(powers[i])) {
      throw std::invalid_argument("power policy: powers must be positive");
    }
    if (i > 0 && powers[i] < powers[i - 1]) {
      throw std::invalid_argument("power policy: powers must be nondecreasing");
    }
  }
  PowerPolicy out;
  out.snr = snr;
  out.scales.resize(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    out.scales[i] = powers[i] / std::pow(snr, 1.0 + exponents[i]);
  }
  out.exponents = std::move(exponents);
  out.powers = std::move(powers);
  return out;
}

FeedbackPolicy make_feedback_policy(double snr, double epsilon,
                                    std::vector<double> powers) {
  if (!(snr > 1.0)) throw std::invalid_argument("feedback policy: snr must be > 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("feedback policy: epsilon must be > 0");
  if (powers.size() < 2) throw std::invalid_argument("feedback policy: need K >= 2");
  const double log_snr = std::log(snr);
  FeedbackPolicy out;
  out.snr = snr;
  out.epsilon = epsilon;
  for (double q : powers) {
    if (q < 0.0 || !std::isfinite(q)) {
      throw std::invalid_argument("feedback policy: powers must be finite and >= 0");
    }
    out.exponents.push_back(q > 0.0 ? std::log(q) / log_snr
                                    : -std::numeric_limits<double>::infinity());
  }
  for (std::size_t i = 0; i + 1 < powers.size(); ++i) {
    out.thresholds.push_back(std::pow(snr, std::max(out.exponents[i], 0.0) + epsilon));
    if (i > 0 && !(out.thresholds[i] > out.thresholds[i - 1])) {
      throw std::invalid_argument("feedback policy: thresholds must increase");
    }
  }
  out.powers = std::move(powers);
  return out;
}

int receiver_index(const ComplexMatrix& h, std::span<const double> powers,
                   double rate, int empty_index) {
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (mutual_information(h, powers[i]) >= rate) return static_cast<int>(i);
  }
  return empty_index;
}

int receiver_index_perfect_csir(const ComplexMatrix& h,
                                const PowerPolicy& powers, double rate) {
  if (rate < 0.0) throw std::invalid_argument("receiver index: rate < 0");
  return receiver_index(h, powers.powers, rate, 0);
}

int receiver_index_estimated_csir(const ComplexMatrix& h_hat,
                                  const PowerPolicy& powers, double rate,
                                  double epsilon, double snr) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("receiver index: epsilon must be > 0");
  return receiver_index(h_hat, powers.powers, rate + epsilon * std::log2(snr),
                        powers.levels() - 1);
}

int detect_index(double energy, const FeedbackPolicy& policy) {
  const auto& t = policy.thresholds;
  return static_cast<int>(std::lower_bound(t.begin(), t.end(), energy) - t.begin());
}

double feedback_energy(const ComplexMatrix& h_f, const ComplexMatrix& w,
                       double q) {
  if (h_f.rows() != w.rows() || h_f.cols() != w.cols()) {
    throw std::invalid_argument("feedback energy: shape mismatch");
  }
  return (std::sqrt(q) * h_f + w).squaredNorm();
}

FeedbackOutcome transmit_feedback_power_controlled(int j_r,
                                                   const FeedbackPolicy& policy,
                                                   const ComplexMatrix& h_f,
                                                   RandomStream& rng) {
  if (j_r < 0 || j_r >= policy.levels()) {
    throw std::invalid_argument("feedback: index out of range");
  }
  ComplexMatrix w(h_f.rows(), h_f.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.complex_normal();
  }
  FeedbackOutcome out;
  out.j_r = j_r;
  out.tx_power = policy.powers[j_r];
  out.energy = feedback_energy(h_f, w, out.tx_power);
  out.j_t = detect_index(out.energy, policy);
  return out;
}

double constant_power_error_probability(int k_levels, double snr, int m, int n,
                                        double c) {
  if (k_levels < 2) throw std::invalid_argument("constant-power feedback needs K >= 2");
  if (!(c >= 0.0)) throw std::invalid_argument("constant-power feedback: c must be >= 0");
  const double e = c * std::pow(snr, -static_cast<double>(m) * n);
  return std::min(e, 1.0 / k_levels);
}

int transmit_feedback_constant_power(int j_r, int k_levels, double snr, int m,
                                     int n, double c, RandomStream& rng) {
  if (j_r < 0 || j_r >= k_levels) {
    throw std::invalid_argument("feedback: index out of range");
  }
  const double e = constant_power_error_probability(k_levels, snr, m, n, c);
  const double u = rng.uniform();
  if (!(u < (k_levels - 1) * e)) return j_r;
  const int wrong = std::min(static_cast<int>(u / e), k_levels - 2);
  return wrong < j_r ? wrong : wrong + 1;
}

}  // namespace dmtlab
