// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "dmtlab/commands.hpp"
#include "dmtlab/config.hpp"

using namespace dmtlab;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("key-value parsing with comments and defaults") {
  KeyValueConfig kv;
  kv.load_text("# link\nm = 1\nn=2\n\nr = 0.5\nscenario = no_feedback, est_csir_noisy_fb_pc\n"
               "snr_db_list = 10,15,20\n");
  const RunSpec spec = kv.build(Command::kSim);
  CHECK(spec.mimo.m == 1);
  CHECK(spec.mimo.n == 2);
  CHECK(spec.mimo.r == doctest::Approx(0.5));
  CHECK(spec.mimo.epsilon == doctest::Approx(0.05));
  CHECK(spec.mimo.n_train == 10);
  CHECK(spec.scenarios.size() == 2);
  CHECK(spec.snr_db.size() == 3);
  CHECK(spec.trials == 100000);
  CHECK(spec.seed == 1);
}

TEST_CASE("configuration errors") {
  KeyValueConfig kv;
  CHECK_THROWS_AS(kv.set("antennas", "2"), ConfigError);
  CHECK_THROWS_AS(kv.load_text("m 2\n"), ConfigError);
  CHECK_THROWS_AS(kv.load_file("/nonexistent/dmtlab.cfg"), ConfigError);

  const auto fails = [](std::string key, std::string value, Command c = Command::kSim) {
    KeyValueConfig k;
    k.set(key, value);
    CHECK_THROWS_AS(k.build(c), ConfigError);
  };
  fails("trials", "0");
  fails("r", "1.0");
  fails("r", "-0.1");
  fails("m", "0");
  fails("n_train", "0");
  fails("epsilon", "0");
  fails("pilot_trials", "100");
  fails("scenario", "bogus");
  fails("snr_db_list", "0,10");
  fails("delta", "0.7");
  fails("parallelism", "0");
  fails("l_users", "2");
  fails("r", "0.1,0.2");
  fails("m", "two");

  KeyValueConfig k3;
  k3.set("k_levels", "3");
  k3.set("scenario", "est_csir_noisy_fb_pc");
  CHECK_THROWS_AS(k3.build(Command::kSim), ConfigError);
  CHECK_NOTHROW(k3.build(Command::kDmt));
}

TEST_CASE("multiple-access defaults") {
  KeyValueConfig kv;
  kv.set("r", "0.1,0.2,0.05");
  kv.set("m", "1");
  kv.set("n", "3");
  const RunSpec spec = kv.build(Command::kMac);
  CHECK(spec.mimo.l_users == 3);
  CHECK(spec.mimo.user_rates().size() == 3);
  KeyValueConfig plain;
  CHECK(plain.build(Command::kMac).mimo.l_users == 2);
}

TEST_CASE("command names round-trip") {
  for (const char* name : {"dmt", "sim", "exponents", "mac", "calibrate"}) {
    const auto c = parse_command(name);
    REQUIRE(c.has_value());
    CHECK(command_name(*c) == name);
  }
  CHECK_FALSE(parse_command("plot").has_value());
  for (Scenario s : kAllScenarios) CHECK(parse_scenario(scenario_name(s)) == s);
}

TEST_CASE("dmt command rows") {
  KeyValueConfig kv;
  kv.set("m", "1");
  kv.set("n", "2");
  kv.set("r_list", "0,0.5,1");
  const auto out = lines(run_command(kv.build(Command::kDmt)).csv);
  REQUIRE(out.size() == 1 + 3 * 8);
  CHECK(out[0] == "r,scenario,diversity");
  CHECK(out[1] == "0,no_feedback,2");
  bool saw_main = false, saw_csit = false;
  for (const auto& l : out) {
    if (l == "0.5,est_csir_noisy_fb_pc,3") saw_main = true;
    if (l == "0.5,perfect_csit,inf") saw_csit = true;
    if (l.rfind("1,", 0) == 0) CHECK(l.substr(l.rfind(',') + 1) == "0");
  }
  CHECK(saw_main);
  CHECK(saw_csit);
}

TEST_CASE("single level collapses every scenario to the no-feedback curve") {
  KeyValueConfig kv;
  kv.set("k_levels", "1");
  kv.set("r_list", "0.2");
  kv.set("scenario", "no_feedback,perfect_csir_noiseless_fb,perfect_csir_noisy_fb_pc");
  const auto out = lines(run_command(kv.build(Command::kDmt)).csv);
  REQUIRE(out.size() == 4);
  for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i].substr(out[i].rfind(',') + 1) == "0.8");
}

TEST_CASE("sim command output is deterministic across thread counts") {
  const auto run = [](const char* threads) {
    KeyValueConfig kv;
    kv.set("trials", "20000");
    kv.set("pilot_trials", "10000");
    kv.set("snr_db_list", "10,15,20");
    kv.set("parallelism", threads);
    return run_command(kv.build(Command::kSim)).csv;
  };
  const std::string one = run("1");
  CHECK(one == run("8"));
  const auto rows = lines(one);
  REQUIRE(rows.size() == 1 + 2 * 4);
  CHECK(rows[0] ==
        "snr_db,scenario,trials,outages,p_hat,ci_low,ci_high,mean_fwd_power,mean_fb_power,degenerate");
  CHECK(rows[4].rfind("summary,no_feedback,", 0) == 0);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(1.0 / 0.0) == "inf");
}
