// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/dmt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dmtlab::dmt {
namespace {

constexpr double kTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_antennas(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("antenna counts must be >= 1");
}

void check_feedback_domain(double r, int k_levels, int m, int n) {
  check_antennas(m, n);
  if (k_levels < 1) throw std::invalid_argument("K must be >= 1");
  if (r < 0.0 || r >= std::min(m, n)) {
    throw std::invalid_argument("multiplexing gain must satisfy 0 <= r < min(m,n)");
  }
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

DmtCurve::DmtCurve(std::vector<Breakpoint> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty()) throw std::invalid_argument("DmtCurve: no breakpoints");
  if (points_.front().r != 0.0) {
    throw std::invalid_argument("DmtCurve: domain must start at r = 0");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].r > points_[i - 1].r)) {
      throw std::invalid_argument("DmtCurve: r must be strictly increasing");
    }
    if (points_[i].d > points_[i - 1].d) {
      throw std::invalid_argument("DmtCurve: d must be nonincreasing");
    }
  }
  if (points_.back().d < 0.0) {
    throw std::invalid_argument("DmtCurve: negative diversity");
  }
}

double DmtCurve::operator()(double r) const {
  const double r_hi = r_max();
  if (r < -kTol || r > r_hi * (1.0 + kTol) + kTol) {
    throw std::out_of_range("DmtCurve: r outside [0, r_max]");
  }
  r = std::clamp(r, 0.0, r_hi);
  if (points_.size() == 1) return points_.front().d;
  auto upper = std::upper_bound(
      points_.begin(), points_.end(), r,
      [](double value, const Breakpoint& bp) { return value < bp.r; });
  if (upper == points_.end()) return points_.back().d;
  const Breakpoint& hi = *upper;
  const Breakpoint& lo = *(upper - 1);
  const double t = (r - lo.r) / (hi.r - lo.r);
  return lo.d + t * (hi.d - lo.d);
}

DmtCurve coherent_curve(double p, int m, int n) {
  check_antennas(m, n);
  if (!(p > 0.0)) throw std::invalid_argument("power exponent must be > 0");
  const int mn_min = std::min(m, n);
  std::vector<Breakpoint> pts;
  pts.reserve(mn_min + 1);
  for (int k = 0; k <= mn_min; ++k) {
    pts.push_back({k * p, p * (m - k) * (n - k)});
  }
  return DmtCurve(std::move(pts));
}

double g_tradeoff(double r, double p, int m, int n) {
  check_antennas(m, n);
  if (!(p > 0.0)) throw std::invalid_argument("g_tradeoff: p must be > 0");
  const int mn_min = std::min(m, n);
  const double r_max = p * mn_min;
  if (r < 0.0 || r > r_max * (1.0 + kTol)) {
    throw std::invalid_argument("g_tradeoff: r outside [0, p min(m,n)]");
  }
  // Evaluate on the unit-power curve and rescale; G(r,p) = p G(r/p, 1).
  const double x = std::min(r / p, static_cast<double>(mn_min));
  const int k = std::min(static_cast<int>(std::floor(x)), mn_min - 1);
  if (mn_min == 0) return 0.0;
  const double d_lo = static_cast<double>(m - k) * (n - k);
  const double d_hi = static_cast<double>(m - k - 1) * (n - k - 1);
  return p * (d_lo + (x - k) * (d_hi - d_lo));
}

std::vector<double> perfect_feedback_ladder(double r, int k_levels, int m,
                                            int n) {
  check_feedback_domain(r, std::max(k_levels, 1), m, n);
  std::vector<double> d(k_levels + 1, 0.0);
  for (int j = 1; j <= k_levels; ++j) d[j] = g_tradeoff(r, 1.0 + d[j - 1], m, n);
  return d;
}

double d_perfect_feedback(double r, int k_levels, int m, int n) {
  check_feedback_domain(r, k_levels, m, n);
  return perfect_feedback_ladder(r, k_levels, m, n).back();
}

std::vector<double> constant_power_ladder(double r, int k_levels, int m,
                                          int n) {
  check_feedback_domain(r, std::max(k_levels, 1), m, n);
  const double mn = static_cast<double>(m) * n;
  std::vector<double> b(k_levels + 1, 0.0);
  for (int j = 1; j <= k_levels; ++j) {
    b[j] = g_tradeoff(r, 1.0 + std::min(mn, b[j - 1]), m, n);
  }
  return b;
}

double d_constant_power_feedback(double r, int k_levels, int m, int n) {
  check_feedback_domain(r, k_levels, m, n);
  if (k_levels <= 1) {
    throw std::invalid_argument("constant-power feedback needs K > 1");
  }
  const double mn = static_cast<double>(m) * n;
  const double b_k = constant_power_ladder(r, k_levels, m, n).back();
  return std::min(b_k, mn + g_tradeoff(r, 1.0, m, n));
}

double power_controlled_objective(double r, int m, int n,
                                  std::span<const double> q) {
  const int k_levels = static_cast<int>(q.size());
  check_feedback_domain(r, k_levels, m, n);
  if (k_levels < 2) throw std::invalid_argument("objective needs K >= 2");
  const auto d = perfect_feedback_ladder(r, k_levels, m, n);
  const double mn = static_cast<double>(m) * n;
  double worst = kInf;
  for (int i = 1; i < k_levels; ++i) {
    worst = std::min(worst,
                     mn * (positive_part(q[i]) - positive_part(q[i - 1])) + d[i]);
  }
  return worst;
}

FeedbackExponents power_controlled_corner_exponents(double r, int k_levels,
                                                    int m, int n) {
  check_feedback_domain(r, k_levels, m, n);
  const auto d = perfect_feedback_ladder(r, k_levels, m, n);
  FeedbackExponents out;
  out.q.assign(k_levels, 0.0);
  for (int j = 1; j < k_levels; ++j) out.q[j] = 1.0 + d[j];
  out.ordered = std::is_sorted(out.q.begin(), out.q.end(), std::less_equal<>());
  return out;
}

PowerControlledTradeoff d_power_controlled_feedback(double r, int k_levels,
                                                    int m, int n) {
  check_feedback_domain(r, k_levels, m, n);
  if (k_levels <= 1) {
    throw std::invalid_argument("power-controlled feedback needs K > 1");
  }
  const auto d = perfect_feedback_ladder(r, k_levels, m, n);
  const double mn = static_cast<double>(m) * n;

  auto feasible = [&](double target) {
    double q = 0.0;
    for (int i = 1; i < k_levels; ++i) {
      q += positive_part((target - d[i]) / mn);
      if (q > 1.0 + d[i] + kTol) return false;
    }
    return true;
  };

  double best = d[k_levels];
  if (!feasible(best)) {
    double lo = d[1];  // all increments zero: always feasible
    double hi = best;
    for (int it = 0; it < 200 && hi - lo > kTol * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
    best = lo;
  }

  PowerControlledTradeoff out;
  out.diversity = best;
  out.exponents.q.assign(k_levels, 0.0);
  auto& q = out.exponents.q;
  q[k_levels - 1] = 1.0 + d[k_levels - 1];
  for (int i = k_levels - 2; i >= 1; --i) {
    q[i] = std::min(1.0 + d[i], q[i + 1] - positive_part((best - d[i + 1]) / mn));
  }
  out.exponents.ordered =
      std::is_sorted(q.begin(), q.end(), std::less_equal<>());
  return out;
}

double d_power_controlled_feedback_relaxed(double r, int k_levels, int m,
                                           int n, double step) {
  check_feedback_domain(r, k_levels, m, n);
  if (k_levels <= 1) {
    throw std::invalid_argument("power-controlled feedback needs K > 1");
  }
  if (!(step > 0.0)) throw std::invalid_argument("lattice step must be > 0");
  const auto d = perfect_feedback_ladder(r, k_levels, m, n);
  const double mn = static_cast<double>(m) * n;
  const double ceiling = d[k_levels];
  const int lattice = static_cast<int>(std::floor((1.0 + ceiling) / step + kTol));

  std::vector<int> level(k_levels, -1);
  std::vector<char> used(lattice + 1, 0);
  double best = -kInf;

  // Feasibility of placing exponent index j at lattice point v, given
  // levels 0..j-1 already placed.
  auto admissible = [&](int j, int v) {
    const double qj = v * step;
    double bound = d[j];
    for (int i = 0; i < j; ++i) {
      if (level[i] > v) bound = std::min(bound, d[i] + (level[i] - v) * step * mn);
    }
    return qj <= 1.0 + bound + kTol;
  };

  // Worst pairwise mismatch term introduced by placing index i at v.
  auto pair_term = [&](int i, int v) {
    double worst = kInf;
    for (int j = 0; j < i; ++j) {
      if (level[j] < v) worst = std::min(worst, mn * (v - level[j]) * step + d[i]);
    }
    return worst;
  };

  auto search = [&](auto&& self, int j, double partial) -> void {
    if (best >= ceiling) return;
    if (std::min(ceiling, partial) <= best) return;
    if (j == k_levels) {
      best = std::min(ceiling, partial);
      return;
    }
    for (int v = lattice; v >= 0; --v) {
      if (used[v] || !admissible(j, v)) continue;
      const double next = std::min(partial, pair_term(j, v));
      if (std::min(ceiling, next) <= best) continue;
      used[v] = 1;
      level[j] = v;
      self(self, j + 1, next);
      used[v] = 0;
      level[j] = -1;
      if (best >= ceiling) return;
    }
  };
  search(search, 0, kInf);
  if (best == -kInf) {
    throw std::runtime_error("relaxed feedback search: empty constraint set");
  }
  return best;
}

double d_training(double r, int m, int n, bool power_controlled) {
  check_feedback_domain(r, 1, m, n);
  const double g1 = g_tradeoff(r, 1.0, m, n);
  return power_controlled ? g_tradeoff(r, 1.0 + g1, m, n) : g1;
}

MacTradeoff mac_tradeoff(std::span<const double> r_vec, double p, int m,
                         int n) {
  check_antennas(m, n);
  const int users = static_cast<int>(r_vec.size());
  if (users < 1 || users > 20) {
    throw std::invalid_argument("mac_tradeoff: user count must be in [1, 20]");
  }
  if (!(p > 0.0)) throw std::invalid_argument("mac_tradeoff: p must be > 0");
  for (double r : r_vec) {
    if (r < 0.0) throw std::invalid_argument("mac_tradeoff: negative rate");
  }
  MacTradeoff out;
  out.diversity = kInf;
  int best_size = users + 1;
  std::uint32_t best_mask = 0;
  const std::uint32_t full = (1u << users) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int size = std::popcount(mask);
    double rate = 0.0;
    for (int i = 0; i < users; ++i) {
      if (mask & (1u << i)) rate += r_vec[i];
    }
    const double limit = std::min(size * m, n) * p;
    if (rate > limit * (1.0 + kTol) + kTol) {
      throw std::invalid_argument("mac_tradeoff: subset rate constraint violated");
    }
    const double value = g_tradeoff(std::min(rate, limit), p, size * m, n);
    if (value < out.diversity || (value == out.diversity && size < best_size)) {
      out.diversity = value;
      best_size = size;
      best_mask = mask;
    }
  }
  for (int i = 0; i < users; ++i) {
    if (best_mask & (1u << i)) out.minimizing_subset.push_back(i);
  }
  return out;
}

double mac_main_tradeoff(std::span<const double> r_vec, int m, int n) {
  const double base = mac_tradeoff(r_vec, 1.0, m, n).diversity;
  return mac_tradeoff(r_vec, 1.0 + base, m, n).diversity;
}

double overhead_adjusted_multiplexing(double r, int t_coh, int overhead_uses) {
  if (t_coh <= overhead_uses || overhead_uses < 0) {
    throw std::invalid_argument("overhead must be smaller than the coherence time");
  }
  return r * t_coh / static_cast<double>(t_coh - overhead_uses);
}

}  // namespace dmtlab::dmt
