// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dmtlab/channel.hpp"

namespace dmtlab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("invalid number for '" + key + "': '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_count(const std::string& key, std::string_view text) {
  text = trim(text);
  // Allow scientific notation such as 1e6 for trial counts.
  const double value = parse_double(key, text);
  if (value < 0.0 || value != std::floor(value) || value > 1e18) {
    throw ConfigError("'" + key + "' must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(value);
}

int parse_int(const std::string& key, std::string_view text) {
  const std::uint64_t v = parse_count(key, text);
  if (v > 1000000000ULL) throw ConfigError("'" + key + "' is too large");
  return static_cast<int>(v);
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError("'" + key + "' must not be empty");
  return out;
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys{
      "m",          "n",           "l_users",      "r",        "k_levels",
      "epsilon",    "n_train",     "scenario",     "snr_db_list", "trials",
      "seed",       "parallelism", "const_fb_c",   "fb_epsilon",  "pilot_trials",
      "r_list",     "delta",       "regions",      "t_coh",    "output"};
  return keys;
}

void MimoConfig::validate() const {
  if (m < 1 || n < 1) throw ConfigError("m and n must be >= 1");
  if (m > kMaxDim || n > kMaxDim) throw ConfigError("antenna counts exceed the supported size");
  if (l_users < 1 || l_users > 8) throw ConfigError("l_users must be in [1, 8]");
  if (l_users * m > kMaxDim) throw ConfigError("l_users * m exceeds the supported size");
  if (k_levels < 1) throw ConfigError("k_levels must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(fb_epsilon > 0.0)) throw ConfigError("fb_epsilon must be > 0");
  if (n_train < m) throw ConfigError("n_train must be >= m");
  if (!(const_fb_c >= 0.0)) throw ConfigError("const_fb_c must be >= 0");
  if (pilot_trials < 10000) throw ConfigError("pilot_trials must be >= 10000");
  if (!r_vec.empty() && static_cast<int>(r_vec.size()) != l_users) {
    throw ConfigError("r must list one gain per user");
  }
  for (double g : user_rates()) {
    if (g < 0.0) throw ConfigError("multiplexing gains must be >= 0");
  }
  if (l_users == 1 && !(r < std::min(m, n))) {
    throw ConfigError("r must satisfy 0 <= r < min(m,n)");
  }
}

std::vector<double> MimoConfig::user_rates() const {
  if (!r_vec.empty()) return r_vec;
  return std::vector<double>(l_users, r);
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::kDmt, Command::kSim, Command::kExponents,
                    Command::kMac, Command::kCalibrate}) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::kDmt: return "dmt";
    case Command::kSim: return "sim";
    case Command::kExponents: return "exponents";
    case Command::kMac: return "mac";
    case Command::kCalibrate: return "calibrate";
  }
  return "unknown";
}

void KeyValueConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  load_text(buf.str());
}

void KeyValueConfig::load_text(std::string_view text) {
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void KeyValueConfig::set(std::string_view key, std::string_view value) {
  const auto& keys = known_config_keys();
  const std::string k(trim(key));
  if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
    throw ConfigError("unknown config key '" + k + "'");
  }
  entries_[k] = std::string(trim(value));
}

RunSpec KeyValueConfig::build(Command command) const {
  RunSpec spec;
  spec.command = command;
  MimoConfig& cfg = spec.mimo;
  if (command == Command::kMac) cfg.l_users = 2;

  for (const auto& [key, value] : entries_) {
    if (key == "m") cfg.m = parse_int(key, value);
    else if (key == "n") cfg.n = parse_int(key, value);
    else if (key == "l_users") cfg.l_users = parse_int(key, value);
    else if (key == "r") {
      const auto rs = parse_list(key, value);
      if (rs.size() == 1) cfg.r = rs.front();
      else cfg.r_vec = rs;
    }
    else if (key == "k_levels") cfg.k_levels = parse_int(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
    else if (key == "fb_epsilon") cfg.fb_epsilon = parse_double(key, value);
    else if (key == "n_train") cfg.n_train = parse_int(key, value);
    else if (key == "t_coh") cfg.t_coh = parse_int(key, value);
    else if (key == "const_fb_c") cfg.const_fb_c = parse_double(key, value);
    else if (key == "pilot_trials") cfg.pilot_trials = parse_count(key, value);
    else if (key == "scenario") {
      for (auto item : split_list(value)) {
        const auto s = parse_scenario(item);
        if (!s) throw ConfigError("unknown scenario '" + std::string(item) + "'");
        spec.scenarios.push_back(*s);
      }
    }
    else if (key == "snr_db_list") {
      spec.snr_db = parse_list(key, value);
      spec.snr_db_set = true;
    }
    else if (key == "trials") spec.trials = parse_count(key, value);
    else if (key == "seed") spec.seed = parse_count(key, value);
    else if (key == "parallelism") spec.parallelism = parse_int(key, value);
    else if (key == "r_list") spec.r_list = parse_list(key, value);
    else if (key == "delta") spec.delta = parse_double(key, value);
    else if (key == "regions") {
      for (auto item : split_list(value)) spec.regions.emplace_back(item);
    }
    else if (key == "output") spec.output = value;
  }

  if (command == Command::kMac && !cfg.r_vec.empty() && !entries_.count("l_users")) {
    cfg.l_users = static_cast<int>(cfg.r_vec.size());
  }
  if (command != Command::kMac) {
    if (cfg.l_users != 1) throw ConfigError("l_users applies to the mac command only");
    if (!cfg.r_vec.empty()) {
      throw ConfigError(command == Command::kDmt
                            ? "use r_list for a multiplexing grid"
                            : "r must be a single value for this command");
    }
  }
  cfg.validate();
  if (spec.trials == 0 && command != Command::kDmt) {
    throw ConfigError("trials must be >= 1");
  }
  if (spec.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (spec.snr_db.empty()) throw ConfigError("snr_db_list must not be empty");
  for (double s : spec.snr_db) {
    if (!(s > 0.0)) throw ConfigError("SNR values must be > 0 dB");
  }
  if (!(spec.delta > 0.0 && spec.delta < 0.5)) throw ConfigError("delta must be in (0, 0.5)");
  for (Scenario s : spec.scenarios) {
    if (s == Scenario::kEstCsirNoisyFbPc && cfg.k_levels != 2 &&
        command != Command::kDmt) {
      throw ConfigError("est_csir_noisy_fb_pc requires k_levels = 2");
    }
  }
  if (spec.scenarios.empty()) {
    if (command == Command::kSim || command == Command::kCalibrate) {
      spec.scenarios = {Scenario::kNoFeedback, Scenario::kEstCsirNoisyFbPc};
    } else if (command == Command::kDmt) {
      spec.scenarios.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
    }
  }
  return spec;
}

}  // namespace dmtlab
