// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmtlab.h"

namespace {

struct Options {
  std::string config_path;
  std::vector<double> snr_db;
  long long trials = -1;
  long long seed = -1;
  int parallelism = 0;
  std::string output;
  std::vector<std::string> overrides;
};

std::string join_numbers(const std::vector<double>& values) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
  return out.str();
}

int exit_code(dmtlab_status status) {
  switch (status) {
    case DMTLAB_OK: return 0;
    case DMTLAB_ERR_INVALID_ARGUMENT:
    case DMTLAB_ERR_CONFIG: return 2;
    case DMTLAB_ERR_CALIBRATION_DEGENERATE: return 3;
    case DMTLAB_ERR_IO: return 4;
    default: return 5;
  }
}

class ConfigHandle {
 public:
  ConfigHandle() { status_ = dmtlab_config_create(&cfg_); }
  ~ConfigHandle() { dmtlab_config_destroy(cfg_); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;

  dmtlab_config* get() const { return cfg_; }
  dmtlab_status status() const { return status_; }

 private:
  dmtlab_config* cfg_ = nullptr;
  dmtlab_status status_ = DMTLAB_OK;
};

int run(const std::string& command, const Options& opt) {
  ConfigHandle cfg;
  if (cfg.status() != DMTLAB_OK) {
    std::cerr << "dmtlab: " << dmtlab_last_error() << '\n';
    return exit_code(cfg.status());
  }
  auto check = [](dmtlab_status s) {
    if (s != DMTLAB_OK) std::cerr << "dmtlab: " << dmtlab_last_error() << '\n';
    return s;
  };

  if (!opt.config_path.empty()) {
    if (auto s = check(dmtlab_config_load(cfg.get(), opt.config_path.c_str()))) {
      return exit_code(s);
    }
  }
  std::vector<std::pair<std::string, std::string>> settings;
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "dmtlab: --set expects key=value, got '" << kv << "'\n";
      return 2;
    }
    settings.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!opt.snr_db.empty()) settings.emplace_back("snr_db_list", join_numbers(opt.snr_db));
  if (opt.trials >= 0) settings.emplace_back("trials", std::to_string(opt.trials));
  if (opt.seed >= 0) settings.emplace_back("seed", std::to_string(opt.seed));
  if (opt.parallelism > 0) {
    settings.emplace_back("parallelism", std::to_string(opt.parallelism));
  }
  for (const auto& [key, value] : settings) {
    if (auto s = check(dmtlab_config_set(cfg.get(), key.c_str(), value.c_str()))) {
      return exit_code(s);
    }
  }

  dmtlab_result* result = nullptr;
  if (auto s = check(dmtlab_run(cfg.get(), command.c_str(), &result))) {
    return exit_code(s);
  }
  const bool degenerate = dmtlab_result_degenerate(result) != 0;
  int code = 0;
  if (opt.output.empty() || opt.output == "-") {
    std::fwrite(dmtlab_result_csv(result), 1, dmtlab_result_size(result), stdout);
    std::fflush(stdout);
  } else {
    std::ofstream out(opt.output, std::ios::binary);
    out.write(dmtlab_result_csv(result),
              static_cast<std::streamsize>(dmtlab_result_size(result)));
    if (!out) {
      std::cerr << "dmtlab: cannot write '" << opt.output << "'\n";
      code = 4;
    }
  }
  dmtlab_result_destroy(result);
  if (code == 0 && degenerate) {
    std::cerr << "dmtlab: warning: calibration saw no occurrences of a required level; "
                 "powers use the 3/N floor\n";
    code = 3;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversity-multiplexing tradeoff laboratory"};
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"dmt", "Emit analytic tradeoff curves"},
      {"sim", "Monte Carlo outage sweep with slope fit"},
      {"exponents", "Joint eigenvalue-exponent verification"},
      {"mac", "Multiple-access protocol sweep"},
      {"calibrate", "Show calibrated power levels"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opt.config_path, "key=value configuration file");
    sub->add_option("--snr-db", opt.snr_db, "SNR grid in dB")->delimiter(',');
    sub->add_option("--trials", opt.trials, "Trials per SNR point");
    sub->add_option("--seed", opt.seed, "Master seed");
    sub->add_option("-j,--parallelism", opt.parallelism, "Worker threads");
    sub->add_option("-o,--output", opt.output, "Output CSV path (default stdout)");
    sub->add_option("--set", opt.overrides, "Override a config key (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (const auto* sub : app.get_subcommands()) return run(sub->get_name(), opt);
  return 2;
}
