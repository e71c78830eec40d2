// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab.h"

#include <exception>
#include <new>
#include <span>
#include <stdexcept>
#include <string>

#include "dmtlab/commands.hpp"
#include "dmtlab/config.hpp"
#include "dmtlab/dmt.hpp"

struct dmtlab_config {
  dmtlab::KeyValueConfig store;
};

struct dmtlab_result {
  std::string csv;
  bool degenerate = false;
};

namespace {

thread_local std::string g_last_error;

dmtlab_status fail(dmtlab_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs fn and maps exceptions onto status codes.
template <typename Fn>
dmtlab_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const dmtlab::ConfigError& e) {
    return fail(DMTLAB_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DMTLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(DMTLAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DMTLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DMTLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DMTLAB_ERR_INTERNAL, "unknown error");
  }
}

dmtlab_status store(double value, double* out) {
  if (!out) return fail(DMTLAB_ERR_INVALID_ARGUMENT, "null output pointer");
  *out = value;
  return DMTLAB_OK;
}

}  // namespace

extern "C" {

const char* dmtlab_last_error(void) { return g_last_error.c_str(); }

const char* dmtlab_version(void) { return "1.0.0"; }

dmtlab_status dmtlab_config_create(dmtlab_config** out) {
  if (!out) return fail(DMTLAB_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new dmtlab_config();
    return DMTLAB_OK;
  });
}

void dmtlab_config_destroy(dmtlab_config* cfg) { delete cfg; }

dmtlab_status dmtlab_config_load(dmtlab_config* cfg, const char* path) {
  if (!cfg || !path) return fail(DMTLAB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    try {
      cfg->store.load_file(path);
    } catch (const dmtlab::ConfigError& e) {
      // Missing files are I/O problems, not malformed content.
      if (std::string(e.what()).rfind("cannot open", 0) == 0) {
        return fail(DMTLAB_ERR_IO, e.what());
      }
      throw;
    }
    return DMTLAB_OK;
  });
}

dmtlab_status dmtlab_config_set(dmtlab_config* cfg, const char* key,
                                const char* value) {
  if (!cfg || !key || !value) return fail(DMTLAB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->store.set(key, value);
    return DMTLAB_OK;
  });
}

dmtlab_status dmtlab_run(const dmtlab_config* cfg, const char* command,
                         dmtlab_result** out) {
  if (!cfg || !command || !out) return fail(DMTLAB_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto cmd = dmtlab::parse_command(command);
    if (!cmd) return fail(DMTLAB_ERR_CONFIG, std::string("unknown command '") + command + "'");
    dmtlab::RunSpec spec;
    try {
      spec = cfg->store.build(*cmd);
    } catch (const std::invalid_argument& e) {
      throw dmtlab::ConfigError(e.what());
    }
    dmtlab::CommandOutput result;
    try {
      result = dmtlab::run_command(spec);
    } catch (const std::invalid_argument& e) {
      // Everything reaching a command came from the configuration.
      throw dmtlab::ConfigError(e.what());
    }
    auto* res = new dmtlab_result();
    res->csv = std::move(result.csv);
    res->degenerate = result.degenerate;
    *out = res;
    return DMTLAB_OK;
  });
}

const char* dmtlab_result_csv(const dmtlab_result* res) {
  return res ? res->csv.c_str() : "";
}

size_t dmtlab_result_size(const dmtlab_result* res) {
  return res ? res->csv.size() : 0;
}

int dmtlab_result_degenerate(const dmtlab_result* res) {
  return res && res->degenerate ? 1 : 0;
}

void dmtlab_result_destroy(dmtlab_result* res) { delete res; }

dmtlab_status dmtlab_g_tradeoff(double r, double p, int m, int n, double* out) {
  return guarded([&] { return store(dmtlab::dmt::g_tradeoff(r, p, m, n), out); });
}

dmtlab_status dmtlab_d_perfect_feedback(double r, int k_levels, int m, int n,
                                        double* out) {
  return guarded(
      [&] { return store(dmtlab::dmt::d_perfect_feedback(r, k_levels, m, n), out); });
}

dmtlab_status dmtlab_d_constant_power_feedback(double r, int k_levels, int m,
                                               int n, double* out) {
  return guarded([&] {
    return store(dmtlab::dmt::d_constant_power_feedback(r, k_levels, m, n), out);
  });
}

dmtlab_status dmtlab_d_power_controlled_feedback(double r, int k_levels, int m,
                                                 int n, double* out,
                                                 double* q_out) {
  return guarded([&] {
    const auto res = dmtlab::dmt::d_power_controlled_feedback(r, k_levels, m, n);
    if (q_out) {
      for (int i = 0; i < k_levels; ++i) q_out[i] = res.exponents.q[i];
    }
    return store(res.diversity, out);
  });
}

dmtlab_status dmtlab_d_power_controlled_feedback_relaxed(double r, int k_levels,
                                                         int m, int n, double step,
                                                         double* out) {
  return guarded([&] {
    return store(
        dmtlab::dmt::d_power_controlled_feedback_relaxed(r, k_levels, m, n, step), out);
  });
}

dmtlab_status dmtlab_d_training(double r, int m, int n, int power_controlled,
                                double* out) {
  return guarded([&] {
    return store(dmtlab::dmt::d_training(r, m, n, power_controlled != 0), out);
  });
}

dmtlab_status dmtlab_mac_tradeoff(const double* r_vec, int users, double p, int m,
                                  int n, double* out) {
  if (!r_vec || users < 1) return fail(DMTLAB_ERR_INVALID_ARGUMENT, "bad rate vector");
  return guarded([&] {
    const std::span<const double> rates(r_vec, static_cast<std::size_t>(users));
    return store(dmtlab::dmt::mac_tradeoff(rates, p, m, n).diversity, out);
  });
}

dmtlab_status dmtlab_mac_main_tradeoff(const double* r_vec, int users, int m,
                                       int n, double* out) {
  if (!r_vec || users < 1) return fail(DMTLAB_ERR_INVALID_ARGUMENT, "bad rate vector");
  return guarded([&] {
    const std::span<const double> rates(r_vec, static_cast<std::size_t>(users));
    return store(dmtlab::dmt::mac_main_tradeoff(rates, m, n), out);
  });
}

}  // extern "C"
