// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmtlab Authors

#include "dmtlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dmtlab/dmt.hpp"
#include "dmtlab/exponents.hpp"
#include "dmtlab/mac.hpp"
#include "dmtlab/protocol.hpp"
#include "dmtlab/stats.hpp"

namespace dmtlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_u(std::uint64_t v) { return std::to_string(v); }

// Slope over the points that carry enough outages; NaN when fewer than three.
SlopeEstimate fit_usable(const std::vector<OutageEstimate>& points) {
  std::vector<OutageEstimate> usable;
  for (const auto& p : points) {
    if (p.outages >= kMinFitOutages) usable.push_back(p);
  }
  if (usable.size() < 3) return {kNaN, kNaN};
  return estimate_diversity_slope(usable);
}

const char* kSimHeader =
    "snr_db,scenario,trials,outages,p_hat,ci_low,ci_high,mean_fwd_power,"
    "mean_fb_power,degenerate\n";

void write_point(std::ostringstream& out, std::string_view label,
                 const OutageEstimate& e, double snr_db, bool degenerate) {
  out << format_number(snr_db) << ',' << label << ',' << fmt_u(e.trials) << ','
      << fmt_u(e.outages) << ',' << format_number(e.p_hat) << ','
      << format_number(e.ci_low) << ',' << format_number(e.ci_high) << ','
      << format_number(e.mean_fwd_power) << ',' << format_number(e.mean_fb_power)
      << ',' << (degenerate ? 1 : 0) << '\n';
}

void write_summary(std::ostringstream& out, std::string_view label,
                   const std::vector<OutageEstimate>& points, double analytic,
                   bool degenerate) {
  std::uint64_t trials = 0, outages = 0;
  for (const auto& p : points) {
    trials += p.trials;
    outages += p.outages;
  }
  const SlopeEstimate fit = fit_usable(points);
  out << "summary," << label << ',' << fmt_u(trials) << ',' << fmt_u(outages) << ','
      << format_number(fit.slope) << ',' << format_number(fit.stderr_) << ','
      << format_number(analytic) << ",,," << (degenerate ? 1 : 0) << '\n';
}

std::vector<double> default_r_grid(int m, int n) {
  std::vector<double> grid;
  const int steps = 20 * std::min(m, n);
  for (int i = 0; i <= steps; ++i) grid.push_back(i / 20.0);
  return grid;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

CommandOutput cmd_dmt(const RunSpec& spec) {
  MimoConfig cfg = spec.mimo;
  const int full = std::min(cfg.m, cfg.n);
  const std::vector<double> grid =
      spec.r_list.empty() ? default_r_grid(cfg.m, cfg.n) : spec.r_list;
  for (double r : grid) {
    if (r < 0.0 || r > full) throw ConfigError("r_list values must lie in [0, min(m,n)]");
  }
  const bool default_rows = spec.scenarios.size() == std::size(kAllScenarios);
  std::ostringstream out;
  out << "r,scenario,diversity\n";
  for (double r : grid) {
    cfg.r = r;
    for (Scenario s : spec.scenarios) {
      const double d = r >= full ? 0.0 : analytic_diversity(s, cfg);
      out << format_number(r) << ',' << scenario_name(s) << ',' << format_number(d) << '\n';
    }
    if (default_rows) {
      out << format_number(r) << ",perfect_csit," << format_number(r >= full ? 0.0 : INFINITY)
          << '\n';
    }
  }
  return {out.str(), false};
}

CommandOutput cmd_sim(const RunSpec& spec) {
  CommandOutput result;
  std::ostringstream out;
  out << kSimHeader;
  for (std::size_t si = 0; si < spec.scenarios.size(); ++si) {
    const Scenario s = spec.scenarios[si];
    std::vector<OutageEstimate> points;
    bool any_degenerate = false;
    for (std::size_t gi = 0; gi < spec.snr_db.size(); ++gi) {
      const double snr = db_to_linear(spec.snr_db[gi]);
      const std::uint64_t seed = derive_seed(spec.seed, static_cast<std::uint64_t>(s), gi);
      Calibration cal = calibrate_power_levels(s, spec.mimo, snr, seed);
      const bool degenerate = cal.degenerate;
      LinkSimulator sim(s, spec.mimo, snr, std::move(cal));
      const OutageEstimate e = estimate_outage(sim, spec.trials, seed, spec.parallelism);
      write_point(out, scenario_name(s), e, spec.snr_db[gi], degenerate);
      points.push_back(e);
      any_degenerate = any_degenerate || degenerate;
    }
    write_summary(out, scenario_name(s), points, analytic_diversity(s, spec.mimo),
                  any_degenerate);
    result.degenerate = result.degenerate || any_degenerate;
  }
  result.csv = out.str();
  return result;
}

CommandOutput cmd_calibrate(const RunSpec& spec) {
  CommandOutput result;
  std::ostringstream out;
  out << "snr_db,scenario,level,power,power_exponent,scale,p_receiver,"
         "p_transmitter,p_insufficient,feedback_power,threshold,degenerate\n";
  for (Scenario s : spec.scenarios) {
    for (std::size_t gi = 0; gi < spec.snr_db.size(); ++gi) {
      const double snr = db_to_linear(spec.snr_db[gi]);
      const std::uint64_t seed = derive_seed(spec.seed, static_cast<std::uint64_t>(s), gi);
      const Calibration cal = calibrate_power_levels(s, spec.mimo, snr, seed);
      result.degenerate = result.degenerate || cal.degenerate;
      for (int i = 0; i < cal.power.levels(); ++i) {
        const bool has_fb = cal.feedback.has_value();
        out << format_number(spec.snr_db[gi]) << ',' << scenario_name(s) << ',' << i
            << ',' << format_number(cal.power.powers[i]) << ','
            << format_number(cal.power.exponents[i]) << ','
            << format_number(cal.power.scales[i]) << ','
            << format_number(cal.receiver_level_probability[i]) << ','
            << format_number(cal.transmitter_level_probability[i]) << ','
            << (i >= 1 ? format_number(cal.insufficient_probability[i]) : "") << ','
            << (has_fb ? format_number(cal.feedback->powers[i]) : "") << ','
            << (has_fb && i + 1 < cal.power.levels()
                    ? format_number(cal.feedback->thresholds[i])
                    : "")
            << ',' << (cal.degenerate ? 1 : 0) << '\n';
      }
    }
  }
  result.csv = out.str();
  return result;
}

CommandOutput cmd_exponents(const RunSpec& spec) {
  const MimoConfig& cfg = spec.mimo;
  const int dim = std::min(cfg.m, cfg.n);
  std::vector<ExponentRegion> regions;
  if (spec.regions.empty()) {
    regions.push_back(parse_region("0:1:1.2:0.4:0.6", cfg.m, cfg.n));
    regions.push_back(parse_region(std::to_string(dim) + ":1:1.2:0:0.5", cfg.m, cfg.n));
  } else {
    for (const auto& text : spec.regions) {
      try {
        regions.push_back(parse_region(text, cfg.m, cfg.n));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  const std::vector<double> grid =
      spec.snr_db_set ? spec.snr_db : std::vector<double>{30, 40, 50, 60};
  for (double db : grid) {
    if (db < 30.0) throw ConfigError("exponent verification needs SNR >= 30 dB");
  }
  std::ostringstream out;
  out << "snr_db,region,k_class,samples,hits,p_hat,ci_low,ci_high,predicted_exponent\n";
  for (std::size_t ri = 0; ri < regions.size(); ++ri) {
    const auto& region = regions[ri];
    const RegionSweep sweep =
        empirical_event_exponent(cfg.m, cfg.n, cfg.n_train, grid, region, spec.trials,
                                 derive_seed(spec.seed, 100 + ri, 0), spec.parallelism,
                                 spec.delta);
    std::uint64_t samples = 0, hits = 0;
    for (const auto& p : sweep.points) {
      out << format_number(p.snr_db) << ',' << region.label << ',' << region.k << ','
          << fmt_u(p.samples) << ',' << fmt_u(p.hits) << ',' << format_number(p.p_hat)
          << ',' << format_number(p.ci_low) << ',' << format_number(p.ci_high) << ','
          << format_number(sweep.predicted) << '\n';
      samples += p.samples;
      hits += p.hits;
    }
    out << "summary," << region.label << ',' << region.k << ',' << fmt_u(samples) << ','
        << fmt_u(hits) << ',' << format_number(sweep.slope) << ','
        << format_number(sweep.slope_stderr) << ",," << format_number(sweep.predicted)
        << '\n';
  }
  // Class occupancy per SNR; the last bin is the boundary band.
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const auto bins = class_histogram(cfg.m, cfg.n, cfg.n_train, db_to_linear(grid[gi]),
                                      spec.trials, derive_seed(spec.seed, 200, gi),
                                      spec.parallelism, spec.delta);
    std::uint64_t total = 0;
    for (auto b : bins) total += b;
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const bool boundary = k + 1 == bins.size();
      const auto ci = stats::wilson_interval(bins[k], total);
      out << format_number(grid[gi]) << ','
          << (boundary ? std::string("class:boundary") : "class:" + std::to_string(k)) << ','
          << (boundary ? std::string("-1") : std::to_string(k)) << ',' << fmt_u(total)
          << ',' << fmt_u(bins[k]) << ','
          << format_number(static_cast<double>(bins[k]) / total) << ','
          << format_number(ci.low) << ',' << format_number(ci.high) << ",\n";
    }
  }
  return {out.str(), false};
}

CommandOutput cmd_mac(const RunSpec& spec) {
  const MimoConfig& cfg = spec.mimo;
  if (cfg.k_levels != 2) throw ConfigError("the mac protocol requires k_levels = 2");
  const auto r_vec = cfg.user_rates();
  double analytic = kNaN;
  try {
    analytic = dmt::mac_main_tradeoff(r_vec, cfg.m, cfg.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  CommandOutput result;
  std::ostringstream out;
  out << kSimHeader;
  std::vector<OutageEstimate> points;
  bool any_degenerate = false;
  for (std::size_t gi = 0; gi < spec.snr_db.size(); ++gi) {
    const double snr = db_to_linear(spec.snr_db[gi]);
    const std::uint64_t seed = derive_seed(spec.seed, 64, gi);
    MacCalibration cal = calibrate_mac(cfg, snr, seed);
    const bool degenerate = cal.degenerate;
    MacSimulator sim(cfg, snr, std::move(cal));
    const OutageEstimate e = estimate_mac_outage(sim, spec.trials, seed, spec.parallelism);
    write_point(out, "mac_est_csir_noisy_fb_pc", e, spec.snr_db[gi], degenerate);
    points.push_back(e);
    any_degenerate = any_degenerate || degenerate;
  }
  write_summary(out, "mac_est_csir_noisy_fb_pc", points, analytic, any_degenerate);
  result.csv = out.str();
  result.degenerate = any_degenerate;
  return result;
}

CommandOutput run_command(const RunSpec& spec) {
  switch (spec.command) {
    case Command::kDmt: return cmd_dmt(spec);
    case Command::kSim: return cmd_sim(spec);
    case Command::kExponents: return cmd_exponents(spec);
    case Command::kMac: return cmd_mac(spec);
    case Command::kCalibrate: return cmd_calibrate(spec);
  }
  throw ConfigError("unknown command");
}

}  // namespace dmtlab
