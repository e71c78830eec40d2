// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <optional>
#include <string_view>

namespace dmtlab {

enum class Scenario {
  kNoFeedback,
  kPerfectCsirNoiselessFb,
  kPerfectCsirNoisyFbConst,
  kPerfectCsirNoisyFbPc,
  kEstCsirNoiselessFbConstTrain,
  kEstCsirNoiselessFbPcTrain,
  kEstCsirNoisyFbPc,
};

inline constexpr Scenario kAllScenarios[] = {
    Scenario::kNoFeedback,
    Scenario::kPerfectCsirNoiselessFb,
    Scenario::kPerfectCsirNoisyFbConst,
    Scenario::kPerfectCsirNoisyFbPc,
    Scenario::kEstCsirNoiselessFbConstTrain,
    Scenario::kEstCsirNoiselessFbPcTrain,
    Scenario::kEstCsirNoisyFbPc,
};

/// Lower-case identifier used in config files and CSV output.
std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

bool uses_estimated_csir(Scenario s);
bool uses_power_controlled_training(Scenario s);
bool uses_power_controlled_feedback(Scenario s);
bool uses_constant_power_feedback(Scenario s);

/// Level assigned when no level meets the rate: 0 with perfect CSIR, the top
/// level when the receiver only has an estimate.
int empty_set_index(Scenario s, int k_levels);

}  // namespace dmtlab
