// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dmtlab/scenario.hpp"

namespace dmtlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MimoConfig {
  int m = 1;
  int n = 1;
  int l_users = 1;
  double r = 0.2;
  std::vector<double> r_vec;  // per-user gains; empty means r for every user
  int k_levels = 2;
  double epsilon = 0.05;      // rate margin exponent at the receiver
  double fb_epsilon = 0.5;    // feedback detection threshold margin
  int n_train = 10;
  int t_coh = 0;              // informational
  double const_fb_c = 1.0;
  std::uint64_t pilot_trials = 100000;

  /// Throws ConfigError when the dimensions or exponents are inconsistent.
  void validate() const;

  /// Per-user gains with r broadcast when r_vec is empty.
  std::vector<double> user_rates() const;
};

enum class Command { kDmt, kSim, kExponents, kMac, kCalibrate };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

struct RunSpec {
  Command command = Command::kDmt;
  MimoConfig mimo;
  std::vector<Scenario> scenarios;
  std::vector<double> snr_db{10, 15, 20, 25, 30};
  bool snr_db_set = false;          // snr_db_list given explicitly
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int parallelism = 1;
  std::string output;               // empty: caller decides
  std::vector<double> r_list;       // dmt grid; empty means default grid
  double delta = 0.1;               // exponent classification slack
  std::vector<std::string> regions; // k:a_lo:a_hi:b_lo:b_hi
};

/// Flat key=value configuration with '#' comments. Unknown keys and
/// malformed values raise ConfigError.
class KeyValueConfig {
 public:
  void load_file(const std::string& path);
  void load_text(std::string_view text);
  void set(std::string_view key, std::string_view value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

  RunSpec build(Command command) const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Accepted configuration keys, in documentation order.
const std::vector<std::string>& known_config_keys();

}  // namespace dmtlab
