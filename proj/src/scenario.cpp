// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace dmtlab {

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kNoFeedback: return "no_feedback";
    case Scenario::kPerfectCsirNoiselessFb: return "perfect_csir_noiseless_fb";
    case Scenario::kPerfectCsirNoisyFbConst: return "perfect_csir_noisy_fb_const";
    case Scenario::kPerfectCsirNoisyFbPc: return "perfect_csir_noisy_fb_pc";
    case Scenario::kEstCsirNoiselessFbConstTrain: return "est_csir_noiseless_fb_const_train";
    case Scenario::kEstCsirNoiselessFbPcTrain: return "est_csir_noiseless_fb_pc_train";
    case Scenario::kEstCsirNoisyFbPc: return "est_csir_noisy_fb_pc";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Scenario s : kAllScenarios) {
    if (scenario_name(s) == lower) return s;
  }
  return std::nullopt;
}

bool uses_estimated_csir(Scenario s) {
  return s == Scenario::kEstCsirNoiselessFbConstTrain ||
         s == Scenario::kEstCsirNoiselessFbPcTrain ||
         s == Scenario::kEstCsirNoisyFbPc;
}

bool uses_power_controlled_training(Scenario s) {
  return s == Scenario::kEstCsirNoiselessFbPcTrain ||
         s == Scenario::kEstCsirNoisyFbPc;
}

bool uses_power_controlled_feedback(Scenario s) {
  return s == Scenario::kPerfectCsirNoisyFbPc || s == Scenario::kEstCsirNoisyFbPc;
}

bool uses_constant_power_feedback(Scenario s) {
  return s == Scenario::kPerfectCsirNoisyFbConst;
}

int empty_set_index(Scenario s, int k_levels) {
  return uses_estimated_csir(s) ? k_levels - 1 : 0;
}

}  // namespace dmtlab
