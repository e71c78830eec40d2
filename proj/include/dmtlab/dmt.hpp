// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <span>
#include <vector>

namespace dmtlab::dmt {

struct Breakpoint {
  double r = 0.0;
  double d = 0.0;
};

/// Piecewise-linear diversity-vs-multiplexing curve on [0, r_max].
///
/// Breakpoints must have strictly increasing r, nonincreasing d and a
/// nonnegative final diversity. Evaluation interpolates linearly between
/// neighbouring breakpoints.
class DmtCurve {
 public:
  explicit DmtCurve(std::vector<Breakpoint> breakpoints);

  double operator()(double r) const;
  double r_max() const { return points_.back().r; }
  std::span<const Breakpoint> breakpoints() const { return points_; }

 private:
  std::vector<Breakpoint> points_;
};

/// Coherent-link tradeoff at power exponent p: breakpoints (kp, p(m-k)(n-k)).
DmtCurve coherent_curve(double p, int m, int n);

/// G(r,p). Rejects p <= 0 and r outside [0, p min(m,n)].
double g_tradeoff(double r, double p, int m, int n);

/// Noiseless K-level feedback: d(r,K) = G(r, 1 + d(r,K-1)), d(r,0) = 0.
double d_perfect_feedback(double r, int k_levels, int m, int n);

/// d(r,0..K) in one pass; element j is d_perfect_feedback(r, j).
std::vector<double> perfect_feedback_ladder(double r, int k_levels, int m,
                                            int n);

/// B_j(r) = G(r, 1 + min(mn, B_{j-1}(r))), B_0 = 0; element j is B_j.
std::vector<double> constant_power_ladder(double r, int k_levels, int m,
                                          int n);

/// Constant-power (equal-error) feedback: min(B_K(r), mn + G(r,1)). K > 1.
double d_constant_power_feedback(double r, int k_levels, int m, int n);

struct FeedbackExponents {
  std::vector<double> q;  // q_0 .. q_{K-1}
  bool ordered = false;   // strictly increasing
};

struct PowerControlledTradeoff {
  double diversity = 0.0;
  FeedbackExponents exponents;
};

/// min_{i=1..K-1} [ mn((q_i)^+ - (q_{i-1})^+) + d_RTq(r,i) ] for a given q.
double power_controlled_objective(double r, int m, int n,
                                  std::span<const double> q);

/// Power-controlled feedback tradeoff
///   min( d_RTq(r,K), max_q min_i [mn((q_i)^+ - (q_{i-1})^+) + d_RTq(r,i)] )
/// subject to q_j <= 1 + d_RTq(r,j). The inner max-min is solved exactly:
/// for a target t the cheapest feasible chain is q_i = q_{i-1} +
/// max(0, (t - d_i)/mn), so feasibility is monotone in t and the optimum is
/// found by bisection. Returned exponents are the largest feasible chain at
/// the optimum.
PowerControlledTradeoff d_power_controlled_feedback(double r, int k_levels,
                                                    int m, int n);

/// The candidate q_0 = 0, q_j = 1 + d_RTq(r,j). Optimal for K = 2 and for
/// r -> 0, not in general.
FeedbackExponents power_controlled_corner_exponents(double r, int k_levels,
                                                    int m, int n);

/// Unordered distinct nonnegative exponents on a lattice of the given step,
/// capped at 1 + d_RTq(r,K), subject to the relaxed power constraint set.
/// Exhaustive depth-first search with pruning. Approximates a supremum.
double d_power_controlled_feedback_relaxed(double r, int k_levels, int m,
                                           int n, double step = 0.05);

/// Training-based CSIR: constant-power training gives G(r,1); power-controlled
/// training gives G(r, 1 + G(r,1)).
double d_training(double r, int m, int n, bool power_controlled);

struct MacTradeoff {
  double diversity = 0.0;
  std::vector<int> minimizing_subset;  // zero-based user indices
};

/// D(r, p) = min_S G_{|S|m, n}(sum_{i in S} r_i, p) over all nonempty subsets.
/// Ties resolve to the smallest subset cardinality, then lowest bitmask.
MacTradeoff mac_tradeoff(std::span<const double> r_vec, double p, int m,
                         int n);

/// D(r, 1 (1 + D(r, 1))).
double mac_main_tradeoff(std::span<const double> r_vec, int m, int n);

/// Rate rescaling r * T/(T - c) for protocols spending c of T channel uses on
/// training and feedback.
double overhead_adjusted_multiplexing(double r, int t_coh, int overhead_uses);

}  // namespace dmtlab::dmt
