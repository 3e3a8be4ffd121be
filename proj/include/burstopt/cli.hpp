#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/realtime.hpp"
#include "burstopt/utility.hpp"

namespace burstopt::cli {

/// Shared command configuration. Defaults are the reference setup: 28-day
/// cycles of hourly slots, 95th percentile, $15/Mbps, A=0.08, a=0.1, N=3.
struct RunConfig {
  BillingPolicy policy;              ///< tau, slot seconds, percentile, first price
  std::vector<double> prices{15.0};  ///< one entry per provider
  UtilitySpec spec;
  std::string solver = "sweep";      ///< sweep | oracle
  std::string forecast = "stochastic";  ///< deterministic | stochastic
  int tangents = 3;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;                   ///< output file or directory per command
  double unit_scale = 1.0;

  void validate() const;
  ProviderSet providers() const;
};

/// Percentile bill of the first cycle in a usage CSV.
void cmd_bill(const std::string& usage_csv, const RunConfig& config,
              std::ostream& out);

/// Plans one cycle from a trace CSV (forecast from its last two cycles) or a
/// scenario JSON, writing Plan JSON to config.out or the stream.
void cmd_plan(const std::string& input_path, const RunConfig& config,
              std::ostream& out);

/// Rolling evaluation over a trace: for every cycle from the third on,
/// forecast from the two preceding cycles and simulate against it. Writes
/// report.csv, report.json and usage.csv under config.out.
void cmd_simulate(const std::string& trace_csv, const RunConfig& config);

struct SweepSpec {
  std::vector<double> price_grid;    ///< delta values
  std::vector<double> factor_grid;   ///< utility factor values
};

/// One rolling simulation per grid point; tidy CSV (param, method, averages).
void cmd_sweep(const std::string& trace_csv, const RunConfig& config,
               const SweepSpec& sweep, std::ostream& out);

/// Writes the linearized model for a scenario JSON as an LP file
/// (multi-provider when more than one price is configured).
void cmd_export_milp(const std::string& scenario_json, const RunConfig& config);

/// The six-case single/multi provider comparison, normalized by Ideal-MSP.
void cmd_compare_providers(const std::string& trace_csv, const RunConfig& config,
                           std::ostream& out);

/// Seeded synthetic trace CSV.
void cmd_synth(const SynthProfile& profile, const RunConfig& config,
               std::ostream& out);

/// Rolling-simulation internals, exposed for the sweep and compare commands
/// and for tests.
struct MethodAverage {
  std::string method;
  double avg_cost = 0.0;
  double avg_surplus = 0.0;
  double avg_normalized = 0.0;
};

struct RollingResult {
  int first_cycle = 3;  ///< 1-based index of the first simulated cycle
  std::vector<CycleReport> reports;
  std::vector<MethodAverage> averages;
};

RollingResult rolling_simulate(const std::vector<std::vector<double>>& cycles,
                               const UtilitySpec& spec,
                               const BillingPolicy& policy, int jobs);
RollingResult rolling_simulate_msp(const std::vector<std::vector<double>>& cycles,
                                   const UtilitySpec& spec,
                                   const ProviderSet& providers, int jobs);

}  // namespace burstopt::cli
