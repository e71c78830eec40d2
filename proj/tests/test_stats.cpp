// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dmtlab/stats.hpp"
#include "oracles.hpp"

using namespace dmtlab::stats;

TEST_CASE("Wilson interval with zero successes") {
  for (std::uint64_t n : {10ull, 1000ull, 1000000ull}) {
    const Interval ci = wilson_interval(0, n);
    CHECK(ci.low == 0.0);
    CHECK(ci.high == doctest::Approx(oracle::wilson_zero_upper(n)).epsilon(1e-12));
  }
  CHECK(wilson_interval(0, 1000000).high * 1e6 == doctest::Approx(3.84).epsilon(0.01));
}

TEST_CASE("Wilson interval brackets the point estimate") {
  const Interval ci = wilson_interval(250, 1000);
  CHECK(ci.low < 0.25);
  CHECK(ci.high > 0.25);
  CHECK(ci.low == doctest::Approx(0.2241).epsilon(1e-3));
  CHECK(ci.high == doctest::Approx(0.2777).epsilon(1e-3));
  const Interval all = wilson_interval(50, 50);
  CHECK(all.high == doctest::Approx(1.0));
  CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);
}

TEST_CASE("line fit recovers exact power laws") {
  std::vector<double> x, y;
  for (double db : {10.0, 15.0, 20.0, 25.0, 30.0}) {
    const double snr = std::pow(10.0, db / 10.0);
    x.push_back(std::log10(snr));
    y.push_back(-std::log10(std::pow(snr, -2.0)));
  }
  const LineFit fit = fit_line(x, y);
  CHECK(std::abs(fit.slope - 2.0) < 1e-9);
  CHECK(std::abs(fit.intercept) < 1e-9);
  CHECK(fit.slope_stderr < 1e-9);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(fit_line(one, one), std::invalid_argument);
}
