// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <cstdint>
#include <span>

namespace dmtlab::stats {

/// Two-sided normal quantile used for every reported interval (95%).
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion. Requires trials > 0.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double z = kZ95);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // zero when only two points are given
};

/// Ordinary least squares y = intercept + slope x. Needs at least two
/// distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace dmtlab::stats
