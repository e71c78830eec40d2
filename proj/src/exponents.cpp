// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/exponents.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "dmtlab/montecarlo.hpp"
#include "dmtlab/stats.hpp"

namespace dmtlab {
namespace {

constexpr double kGridStep = 0.01;

double parse_field(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("region: bad number '" + std::string(text) + "'");
  }
  return v;
}

// Minimum of w * x over the grid lo, lo + step, ..., hi.
double grid_min_linear(double w, double lo, double hi) {
  double best = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::floor((hi - lo) / kGridStep + 1e-9));
  for (int s = 0; s <= steps; ++s) best = std::min(best, w * (lo + s * kGridStep));
  return std::min(best, w * hi);
}

}  // namespace

JointExponentSample joint_exponents(const ComplexMatrix& h, double snr,
                                    int n_train, RandomStream& rng) {
  const EstimateResult est = mmse_estimate(h, snr, n_train, rng);
  JointExponentSample s;
  s.alpha = eigen_exponents(h, snr);
  s.alpha_hat = eigen_exponents(est.h_hat, snr);
  s.snr = snr;
  s.rho = est.rho;
  return s;
}

std::vector<JointExponentSample> sample_joint_exponents(int m, int n, double snr,
                                                        int n_train,
                                                        std::uint64_t trials,
                                                        RandomStream& rng) {
  if (!(snr > 1.0)) throw std::invalid_argument("joint exponents: snr must be > 1");
  std::vector<JointExponentSample> out;
  out.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    out.push_back(joint_exponents(sample_rayleigh(m, n, rng), snr, n_train, rng));
  }
  return out;
}

int classify_event(const JointExponentSample& sample, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::invalid_argument("classify_event: delta must be in (0, 0.5)");
  }
  const auto& a = sample.alpha;
  const auto& b = sample.alpha_hat;
  if (a.size() != b.size()) throw std::invalid_argument("classify_event: length mismatch");
  const int dim = static_cast<int>(a.size());
  for (int k = dim; k >= 0; --k) {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) ok = std::min(a[i], b[i]) >= 1.0 - delta;
    for (int i = k; i < dim && ok; ++i) {
      // No lower bound: a strong mode (alpha < 0) is still below the floor.
      ok = a[i] < 1.0 + delta && std::abs(a[i] - b[i]) < delta;
    }
    if (ok) return k;
  }
  return kBoundaryClass;
}

void validate_region(const ExponentRegion& r, int m, int n) {
  const int dim = std::min(m, n);
  if (r.k < 0 || r.k > dim) throw std::invalid_argument("region: k out of range");
  if (r.k > 0 && !(r.a_lo >= 1.0 && r.a_hi > r.a_lo)) {
    throw std::invalid_argument("region: the above-floor band must satisfy 1 <= a_lo < a_hi");
  }
  if (r.k < dim && !(r.b_lo >= 0.0 && r.b_hi > r.b_lo && r.b_hi < 1.0)) {
    throw std::invalid_argument("region: the paired band must satisfy 0 <= b_lo < b_hi < 1");
  }
}

ExponentRegion parse_region(std::string_view text, int m, int n) {
  std::vector<std::string_view> parts;
  std::string_view rest = text;
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(rest.substr(0, colon));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  if (parts.size() != 5) {
    throw std::invalid_argument("region: expected k:a_lo:a_hi:b_lo:b_hi, got '" +
                                std::string(text) + "'");
  }
  ExponentRegion r;
  const double k = parse_field(parts[0]);
  if (k != std::floor(k)) throw std::invalid_argument("region: k must be an integer");
  r.k = static_cast<int>(k);
  r.a_lo = parse_field(parts[1]);
  r.a_hi = parse_field(parts[2]);
  r.b_lo = parse_field(parts[3]);
  r.b_hi = parse_field(parts[4]);
  r.label = std::string(text);
  validate_region(r, m, n);
  return r;
}

bool region_contains(const ExponentRegion& r, const JointExponentSample& s,
                     double delta) {
  const int dim = static_cast<int>(s.alpha.size());
  for (int i = 0; i < r.k; ++i) {
    if (s.alpha[i] < r.a_lo || s.alpha[i] > r.a_hi) return false;
    if (s.alpha_hat[i] < r.a_lo || s.alpha_hat[i] > r.a_hi) return false;
  }
  for (int i = r.k; i < dim; ++i) {
    if (s.alpha[i] < r.b_lo || s.alpha[i] > r.b_hi) return false;
    if (std::abs(s.alpha[i] - s.alpha_hat[i]) >= delta) return false;
  }
  return true;
}

double predicted_region_exponent(const ExponentRegion& r, int m, int n) {
  validate_region(r, m, n);
  const int dim = std::min(m, n);
  const int nu = std::abs(m - n);
  // Density exponent of class k: -k(nu+k) + sum_{i<=k} w_i alpha_hat_i +
  // sum_i w_i alpha_i with w_i = 2i - 1 + nu. It is separable and linear, so
  // the grid minimum is taken coordinate by coordinate.
  double total = -static_cast<double>(r.k) * (nu + r.k);
  for (int i = 1; i <= dim; ++i) {
    const double w = 2.0 * i - 1.0 + nu;
    if (i <= r.k) {
      total += grid_min_linear(w, r.a_lo, r.a_hi);  // alpha_i
      total += grid_min_linear(w, r.a_lo, r.a_hi);  // alpha_hat_i
    } else {
      total += grid_min_linear(w, r.b_lo, r.b_hi);
    }
  }
  return total;
}

RegionSweep empirical_event_exponent(int m, int n, int n_train,
                                     std::span<const double> snr_db,
                                     const ExponentRegion& region,
                                     std::uint64_t trials_per_snr,
                                     std::uint64_t seed, int parallelism,
                                     double delta) {
  validate_region(region, m, n);
  if (trials_per_snr == 0) throw std::invalid_argument("exponents: trials must be >= 1");
  RegionSweep sweep;
  sweep.predicted = predicted_region_exponent(region, m, n);
  std::vector<double> x, y;
  for (std::size_t g = 0; g < snr_db.size(); ++g) {
    const double snr = std::pow(10.0, snr_db[g] / 10.0);
    if (!(snr > 1.0)) throw std::invalid_argument("exponents: snr must be > 0 dB");
    // Each grid point gets its own stream family so points are independent.
    const TrialTally tally = run_blocks(
        trials_per_snr, seed + 1000003ULL * g, StreamTag::kExponents, parallelism,
        [&](RandomStream& rng, std::uint64_t count, TrialTally& t) {
          for (std::uint64_t i = 0; i < count; ++i) {
            const auto s = joint_exponents(sample_rayleigh(m, n, rng), snr, n_train, rng);
            ++t.trials;
            if (region_contains(region, s, delta)) ++t.outages;
          }
        });
    RegionPoint p;
    p.snr_db = snr_db[g];
    p.samples = tally.trials;
    p.hits = tally.outages;
    p.p_hat = static_cast<double>(p.hits) / p.samples;
    const auto ci = stats::wilson_interval(p.hits, p.samples);
    p.ci_low = ci.low;
    p.ci_high = ci.high;
    sweep.points.push_back(p);
    if (p.hits >= 10) {
      x.push_back(std::log10(snr));
      y.push_back(-std::log10(p.p_hat));
    }
  }
  if (x.size() >= 3 && x.size() == snr_db.size()) {
    const auto fit = stats::fit_line(x, y);
    sweep.slope = fit.slope;
    sweep.slope_stderr = fit.slope_stderr;
  } else {
    sweep.slope = std::numeric_limits<double>::quiet_NaN();
    sweep.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return sweep;
}

std::vector<std::uint64_t> class_histogram(int m, int n, int n_train, double snr,
                                           std::uint64_t trials,
                                           std::uint64_t seed, int parallelism,
                                           double delta) {
  const int dim = std::min(m, n);
  std::vector<std::uint64_t> total(dim + 2, 0);
  std::mutex total_mutex;
  // Integer bins, so the merge order does not affect the result.
  run_blocks(trials, seed, StreamTag::kExponents, parallelism,
             [&](RandomStream& rng, std::uint64_t count, TrialTally& t) {
               std::vector<std::uint64_t> bins(dim + 2, 0);
               for (std::uint64_t i = 0; i < count; ++i) {
                 const auto s = joint_exponents(sample_rayleigh(m, n, rng), snr, n_train, rng);
                 const int k = classify_event(s, delta);
                 ++bins[k == kBoundaryClass ? dim + 1 : k];
               }
               t.trials += count;
               std::lock_guard<std::mutex> lock(total_mutex);
               for (int i = 0; i < dim + 2; ++i) total[i] += bins[i];
             });
  return total;
}

PairingStats noise_floor_pairing(int m, int n, int n_train, double snr,
                                 std::uint64_t trials, std::uint64_t seed,
                                 int parallelism, double cut, double tolerance) {
  const TrialTally tally = run_blocks(
      trials, seed, StreamTag::kExponents, parallelism,
      [&](RandomStream& rng, std::uint64_t count, TrialTally& t) {
        for (std::uint64_t i = 0; i < count; ++i) {
          const auto s = joint_exponents(sample_rayleigh(m, n, rng), snr, n_train, rng);
          if (s.alpha.front() >= cut) continue;  // descending: front is the largest
          ++t.trials;
          double worst = 0.0;
          for (std::size_t j = 0; j < s.alpha.size(); ++j) {
            worst = std::max(worst, std::abs(s.alpha[j] - s.alpha_hat[j]));
          }
          if (worst < tolerance) ++t.outages;
        }
      });
  return {tally.trials, tally.outages};
}

}  // namespace dmtlab
