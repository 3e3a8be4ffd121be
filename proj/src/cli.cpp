#include "burstopt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "burstopt/detail/format.hpp"
#include "burstopt/detail/log.hpp"
#include "burstopt/detail/parallel.hpp"
#include "burstopt/milp.hpp"
#include "burstopt/multi_provider.hpp"
#include "burstopt/planner_deterministic.hpp"
#include "burstopt/planner_stochastic.hpp"

namespace burstopt::cli {

namespace {

using detail::format_double;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cli: cannot write '" + path + "'");
  return out;
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec)
    throw std::runtime_error("cli: cannot create directory '" + path + "'");
}

DemandScenario forecast_from_cycles(const std::vector<double>& prev1,
                                    const std::vector<double>& prev2,
                                    const std::string& kind) {
  if (kind == "deterministic") return forecast_deterministic(prev1, prev2);
  if (kind == "stochastic") return forecast_stochastic(prev1, prev2);
  throw std::invalid_argument("cli: unknown forecast '" + kind + "'");
}

}  // namespace

void RunConfig::validate() const {
  policy.validate();
  spec.validate();
  if (prices.empty()) throw std::invalid_argument("cli: need at least one price");
  for (double p : prices)
    if (p < 0.0) throw std::invalid_argument("cli: prices must be nonnegative");
  if (solver != "sweep" && solver != "oracle")
    throw std::invalid_argument("cli: solver must be 'sweep' or 'oracle'");
  if (forecast != "deterministic" && forecast != "stochastic")
    throw std::invalid_argument(
        "cli: forecast must be 'deterministic' or 'stochastic'");
  if (tangents < 1) throw std::invalid_argument("cli: tangents must be >= 1");
  if (jobs < 1) throw std::invalid_argument("cli: jobs must be >= 1");
  if (!(unit_scale > 0.0))
    throw std::invalid_argument("cli: unit-scale must be positive");
}

ProviderSet RunConfig::providers() const {
  ProviderSet set;
  set.base = policy;
  set.price_deltas = prices;
  return set;
}

void cmd_bill(const std::string& usage_csv, const RunConfig& config,
              std::ostream& out) {
  config.validate();
  const Trace trace = load_trace(usage_csv, {config.unit_scale});
  const auto cycles = slice_cycles(trace, config.policy.tau);
  const UsageSeries& cycle = cycles.front();
  const double mu95 = percentile_usage(cycle, config.policy);
  const double cost = config.policy.price_delta * mu95;
  out << "samples=" << config.policy.tau << "\n"
      << "discarded_samples=" << config.policy.burst_budget() << "\n"
      << "kept_samples=" << config.policy.kept_count() << "\n"
      << "mu95_mbps=" << format_double(mu95) << "\n"
      << "cost=" << format_double(cost) << "\n";
  if (!config.out.empty()) {
    nlohmann::json j = {{"samples", config.policy.tau},
                        {"discarded_samples", config.policy.burst_budget()},
                        {"kept_samples", config.policy.kept_count()},
                        {"mu95_mbps", mu95},
                        {"cost", cost}};
    auto file = open_output(config.out);
    file << j.dump(2) << '\n';
    detail::log_info("wrote bill report to " + config.out);
  }
}

void cmd_plan(const std::string& input_path, const RunConfig& config,
              std::ostream& out) {
  config.validate();
  DemandScenario scenario;
  if (input_path.size() >= 5 &&
      input_path.substr(input_path.size() - 5) == ".json") {
    scenario = load_scenario(input_path);
    if (scenario.tau() != config.policy.tau)
      throw std::invalid_argument("cli: scenario tau does not match --tau");
    if (config.forecast == "deterministic" && !scenario.is_deterministic())
      scenario = DemandScenario::deterministic(scenario.mean_demand());
  } else {
    const Trace trace = load_trace(input_path, {config.unit_scale});
    const auto cycles = slice_cycles(trace, config.policy.tau);
    if (cycles.size() < 2)
      throw std::invalid_argument(
          "cli: planning from a trace needs at least two prior cycles");
    scenario = forecast_from_cycles(cycles[cycles.size() - 2], cycles.back(),
                                    config.forecast);
  }

  std::string text;
  if (config.prices.size() > 1) {
    if (config.solver == "oracle")
      throw std::invalid_argument(
          "cli: the oracle solver plans a single provider; drop the extra "
          "--price values or use the sweep solver");
    const MultiPlan plan =
        solve_multi(scenario, config.spec, config.providers());
    text = multiplan_to_json(plan, config.providers()).dump(2) + "\n";
  } else {
    Plan plan;
    if (config.solver == "oracle")
      plan = solve_oracle(scenario, config.spec, config.policy);
    else if (scenario.is_deterministic())
      plan = solve_deterministic(scenario, config.spec, config.policy);
    else
      plan = solve_sweep(scenario, config.spec, config.policy);
    text = plan_to_json(plan).dump(2) + "\n";
  }
  if (!config.out.empty()) {
    auto file = open_output(config.out);
    file << text;
    detail::log_info("wrote plan to " + config.out);
  } else {
    out << text;
  }
}

namespace {

std::vector<MethodAverage> average_methods(
    const std::vector<CycleReport>& reports) {
  std::vector<MethodAverage> averages;
  if (reports.empty()) return averages;
  for (const auto& m : reports.front().methods)
    averages.push_back({m.method, 0.0, 0.0, 0.0});
  for (const auto& report : reports)
    for (size_t i = 0; i < report.methods.size(); ++i) {
      averages[i].avg_cost += report.methods[i].realized_cost;
      averages[i].avg_surplus += report.methods[i].realized_surplus;
      averages[i].avg_normalized += report.methods[i].normalized_surplus;
    }
  const double n = static_cast<double>(reports.size());
  for (auto& avg : averages) {
    avg.avg_cost /= n;
    avg.avg_surplus /= n;
    avg.avg_normalized /= n;
  }
  return averages;
}

template <class Simulate>
RollingResult rolling_impl(const std::vector<std::vector<double>>& cycles,
                           int jobs, Simulate&& simulate) {
  if (cycles.size() < 3)
    throw std::invalid_argument(
        "cli: rolling evaluation needs at least three cycles (two of history "
        "plus one of truth)");
  const int n = static_cast<int>(cycles.size()) - 2;
  RollingResult result;
  result.reports.resize(n);
  detail::parallel_for(n, jobs, [&](int i) {
    result.reports[i] = simulate(cycles[i], cycles[i + 1], cycles[i + 2]);
  });
  result.averages = average_methods(result.reports);
  return result;
}

}  // namespace

RollingResult rolling_simulate(const std::vector<std::vector<double>>& cycles,
                               const UtilitySpec& spec,
                               const BillingPolicy& policy, int jobs) {
  return rolling_impl(cycles, jobs,
                      [&](const auto& h1, const auto& h2, const auto& truth) {
                        return simulate_cycle(
                            truth, forecast_stochastic(h1, h2), spec, policy);
                      });
}

RollingResult rolling_simulate_msp(
    const std::vector<std::vector<double>>& cycles, const UtilitySpec& spec,
    const ProviderSet& providers, int jobs) {
  return rolling_impl(cycles, jobs,
                      [&](const auto& h1, const auto& h2, const auto& truth) {
                        return simulate_cycle_msp(
                            truth, forecast_stochastic(h1, h2), spec, providers);
                      });
}

namespace {

void write_report_csv(std::ostream& out, const RollingResult& rolling) {
  out << "cycle,method,cost,surplus,normalized_surplus\n";
  for (size_t i = 0; i < rolling.reports.size(); ++i)
    for (const auto& m : rolling.reports[i].methods)
      out << (rolling.first_cycle + i) << ',' << m.method << ','
          << format_double(m.realized_cost) << ','
          << format_double(m.realized_surplus) << ','
          << format_double(m.normalized_surplus) << '\n';
  for (const auto& avg : rolling.averages)
    out << "avg," << avg.method << ',' << format_double(avg.avg_cost) << ','
        << format_double(avg.avg_surplus) << ','
        << format_double(avg.avg_normalized) << '\n';
}

void write_usage_csv(std::ostream& out, const RollingResult& rolling,
                     const std::vector<std::vector<double>>& cycles) {
  out << "cycle,slot,method,usage_mbps\n";
  for (size_t i = 0; i < rolling.reports.size(); ++i) {
    const auto& truth = cycles[i + 2];
    for (size_t t = 0; t < truth.size(); ++t)
      out << (rolling.first_cycle + i) << ',' << (t + 1) << ",Exposed,"
          << format_double(truth[t]) << '\n';
    for (const auto& m : rolling.reports[i].methods)
      for (size_t t = 0; t < m.updated_usage.size(); ++t)
        out << (rolling.first_cycle + i) << ',' << (t + 1) << ',' << m.method
            << ',' << format_double(m.updated_usage[t]) << '\n';
  }
}

nlohmann::json rolling_to_json(const RollingResult& rolling) {
  nlohmann::json cycles = nlohmann::json::array();
  for (size_t i = 0; i < rolling.reports.size(); ++i) {
    nlohmann::json entry = cycle_report_to_json(rolling.reports[i]);
    entry["cycle"] = rolling.first_cycle + i;
    cycles.push_back(std::move(entry));
  }
  nlohmann::json averages = nlohmann::json::array();
  for (const auto& avg : rolling.averages)
    averages.push_back({{"method", avg.method},
                        {"avg_cost", avg.avg_cost},
                        {"avg_surplus", avg.avg_surplus},
                        {"avg_normalized_surplus", avg.avg_normalized}});
  return {{"cycles", std::move(cycles)}, {"average", std::move(averages)}};
}

}  // namespace

void cmd_simulate(const std::string& trace_csv, const RunConfig& config) {
  config.validate();
  if (config.out.empty())
    throw std::invalid_argument("cli: simulate needs --out <directory>");
  const Trace trace = load_trace(trace_csv, {config.unit_scale});
  const auto cycles = slice_cycles(trace, config.policy.tau);
  const RollingResult rolling =
      rolling_simulate(cycles, config.spec, config.policy, config.jobs);
  ensure_directory(config.out);
  {
    auto out = open_output(config.out + "/report.csv");
    write_report_csv(out, rolling);
  }
  {
    auto out = open_output(config.out + "/report.json");
    out << rolling_to_json(rolling).dump(2) << '\n';
  }
  {
    auto out = open_output(config.out + "/usage.csv");
    write_usage_csv(out, rolling, cycles);
  }
  detail::log_info("wrote simulation reports to " + config.out);
}

void cmd_sweep(const std::string& trace_csv, const RunConfig& config,
               const SweepSpec& sweep, std::ostream& out) {
  config.validate();
  const bool price_sweep = !sweep.price_grid.empty();
  const bool factor_sweep = !sweep.factor_grid.empty();
  if (price_sweep == factor_sweep)
    throw std::invalid_argument(
        "cli: sweep needs exactly one of a price grid or a utility factor grid");
  const std::vector<double>& grid =
      price_sweep ? sweep.price_grid : sweep.factor_grid;

  const Trace trace = load_trace(trace_csv, {config.unit_scale});
  const auto cycles = slice_cycles(trace, config.policy.tau);

  std::vector<RollingResult> results(grid.size());
  detail::parallel_for(
      static_cast<int>(grid.size()), config.jobs, [&](int g) {
        RunConfig point = config;
        if (price_sweep)
          point.policy.price_delta = grid[g];
        else
          point.spec.factor_A = grid[g];
        results[g] = rolling_simulate(cycles, point.spec, point.policy, 1);
      });

  std::ostringstream csv;
  csv << "param,method,avg_cost,avg_surplus\n";
  for (size_t g = 0; g < grid.size(); ++g)
    for (const auto& avg : results[g].averages)
      csv << format_double(grid[g]) << ',' << avg.method << ','
          << format_double(avg.avg_cost) << ','
          << format_double(avg.avg_surplus) << '\n';
  if (!config.out.empty()) {
    auto file = open_output(config.out);
    file << csv.str();
    detail::log_info("wrote sweep report to " + config.out);
  } else {
    out << csv.str();
  }
}

void cmd_export_milp(const std::string& scenario_json, const RunConfig& config) {
  config.validate();
  if (config.out.empty())
    throw std::invalid_argument("cli: export-milp needs --out <file.lp>");
  const DemandScenario scenario = load_scenario(scenario_json);
  if (scenario.tau() != config.policy.tau)
    throw std::invalid_argument("cli: scenario tau does not match --tau");
  MilpModel model;
  if (config.prices.size() > 1)
    model = build_milp_multi(scenario, config.spec, config.providers(),
                             config.tangents);
  else
    model = build_milp(scenario, config.spec, config.policy, config.tangents);
  export_lp(model, config.out);
  detail::log_info("wrote LP model to " + config.out);
}

void cmd_compare_providers(const std::string& trace_csv, const RunConfig& config,
                           std::ostream& out) {
  config.validate();
  if (config.prices.size() < 2)
    throw std::invalid_argument(
        "cli: compare-providers needs at least two --price values");
  const Trace trace = load_trace(trace_csv, {config.unit_scale});
  const auto cycles = slice_cycles(trace, config.policy.tau);
  const RollingResult rolling = rolling_simulate_msp(
      cycles, config.spec, config.providers(), config.jobs);
  std::ostringstream csv;
  write_report_csv(csv, rolling);
  if (!config.out.empty()) {
    auto file = open_output(config.out);
    file << csv.str();
    detail::log_info("wrote provider comparison to " + config.out);
  } else {
    out << csv.str();
  }
}

void cmd_synth(const SynthProfile& profile, const RunConfig& config,
               std::ostream& out) {
  const Trace trace = synth_trace(profile, config.seed);
  if (!config.out.empty()) {
    auto file = open_output(config.out);
    write_trace_csv(trace, file);
    detail::log_info("wrote synthetic trace to " + config.out);
  } else {
    write_trace_csv(trace, out);
  }
}

}  // namespace burstopt::cli
