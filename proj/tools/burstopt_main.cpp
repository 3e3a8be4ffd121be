#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "burstopt/cli.hpp"
#include "burstopt/common.hpp"
#include "burstopt/detail/log.hpp"

namespace {

using burstopt::cli::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--tau", config.policy.tau, "Slots per billing cycle");
  cmd->add_option("--slot-seconds", config.policy.slot_seconds,
                  "Slot length in seconds");
  cmd->add_option("--percentile", config.policy.percentile_q,
                  "Billed percentile in (0,1]");
  cmd->add_option("--price", config.prices,
                  "Bandwidth price $/Mbps (repeat for multiple providers)");
  cmd->add_option("--utility-A", config.spec.factor_A, "Utility factor A");
  cmd->add_option("--utility-a", config.spec.curvature_a,
                  "Utility concavity a in (0,1]");
  cmd->add_option("--tangents", config.tangents,
                  "Tangent lines in the linearized model");
  cmd->add_option("--solver", config.solver, "Solver: sweep or oracle");
  cmd->add_option("--forecast", config.forecast,
                  "Forecast: deterministic or stochastic");
  cmd->add_option("--seed", config.seed, "Random seed");
  cmd->add_option("--jobs", config.jobs, "Worker threads for sweeps and cycles");
  cmd->add_option("--out", config.out, "Output file or directory");
  cmd->add_option("--unit-scale", config.unit_scale,
                  "Raw trace units per Mbps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Burstable-billing usage planning toolkit"};
  app.require_subcommand(1);

  RunConfig config;
  config.policy.price_delta = 15.0;

  std::string input_path;
  burstopt::cli::SweepSpec sweep;
  burstopt::SynthProfile profile;

  auto* bill = app.add_subcommand("bill", "Percentile bill of a usage CSV");
  bill->add_option("usage_csv", input_path, "Usage CSV file")->required();
  add_common_options(bill, config);

  auto* plan = app.add_subcommand(
      "plan", "Plan one cycle from a trace CSV or scenario JSON");
  plan->add_option("input", input_path, "Trace CSV or scenario JSON")->required();
  add_common_options(plan, config);

  auto* simulate = app.add_subcommand(
      "simulate", "Rolling method comparison over a trace");
  simulate->add_option("trace_csv", input_path, "Trace CSV file")->required();
  add_common_options(simulate, config);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Parameter sweep over rolling simulations");
  sweep_cmd->add_option("trace_csv", input_path, "Trace CSV file")->required();
  sweep_cmd->add_option("--delta-grid", sweep.price_grid,
                        "Bandwidth prices to sweep");
  sweep_cmd->add_option("--factor-grid", sweep.factor_grid,
                        "Utility factors to sweep");
  add_common_options(sweep_cmd, config);

  auto* export_milp = app.add_subcommand(
      "export-milp", "Write the linearized model for a scenario as an LP file");
  export_milp->add_option("scenario_json", input_path, "Scenario JSON file")
      ->required();
  add_common_options(export_milp, config);

  auto* compare = app.add_subcommand(
      "compare-providers", "Six-case single/multi provider comparison");
  compare->add_option("trace_csv", input_path, "Trace CSV file")->required();
  add_common_options(compare, config);

  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic trace CSV");
  synth->add_option("--slots", profile.num_slots, "Number of slots");
  synth->add_option("--base", profile.base_mbps, "Base level in Mbps");
  synth->add_option("--amplitude", profile.diurnal_amplitude,
                    "Diurnal amplitude in [0,1)");
  synth->add_option("--period", profile.period_slots, "Diurnal period in slots");
  synth->add_option("--noise", profile.noise_level, "Relative noise in [0,1)");
  synth->add_option("--burst-prob", profile.burst_probability,
                    "Per-slot burst probability");
  synth->add_option("--burst-height", profile.burst_height, "Burst multiplier");
  add_common_options(synth, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  if (!config.prices.empty()) config.policy.price_delta = config.prices.front();

  try {
    if (bill->parsed()) {
      burstopt::cli::cmd_bill(input_path, config, std::cout);
    } else if (plan->parsed()) {
      burstopt::cli::cmd_plan(input_path, config, std::cout);
    } else if (simulate->parsed()) {
      burstopt::cli::cmd_simulate(input_path, config);
    } else if (sweep_cmd->parsed()) {
      burstopt::cli::cmd_sweep(input_path, config, sweep, std::cout);
    } else if (export_milp->parsed()) {
      burstopt::cli::cmd_export_milp(input_path, config);
    } else if (compare->parsed()) {
      burstopt::cli::cmd_compare_providers(input_path, config, std::cout);
    } else if (synth->parsed()) {
      profile.slot_seconds = static_cast<std::int64_t>(config.policy.slot_seconds);
      burstopt::cli::cmd_synth(profile, config, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const burstopt::SolverGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
