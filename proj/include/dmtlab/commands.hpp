// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <string>

#include "dmtlab/config.hpp"

namespace dmtlab {

struct CommandOutput {
  std::string csv;
  bool degenerate = false;
};

CommandOutput run_command(const RunSpec& spec);

CommandOutput cmd_dmt(const RunSpec& spec);
CommandOutput cmd_sim(const RunSpec& spec);
CommandOutput cmd_exponents(const RunSpec& spec);
CommandOutput cmd_mac(const RunSpec& spec);
CommandOutput cmd_calibrate(const RunSpec& spec);

/// Shortest round-trip-safe-enough rendering used in every CSV cell (%.12g,
/// "inf"/"nan" for non-finite values).
std::string format_number(double v);

}  // namespace dmtlab
