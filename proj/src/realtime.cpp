#include "burstopt/realtime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "burstopt/planner_deterministic.hpp"
#include "burstopt/planner_stochastic.hpp"

namespace burstopt {

UsageSeries update_usage(const Plan& plan, const ExposedDemand& exposed,
                         const BillingPolicy& policy) {
  policy.validate();
  if (plan.planned_usage.size() != exposed.size() ||
      plan.burst_mask.size() != exposed.size() ||
      static_cast<int>(exposed.size()) != policy.tau)
    throw std::invalid_argument("realtime: plan/exposed length mismatch");
  const double mu = percentile_usage(plan.planned_usage, policy);
  UsageSeries updated(exposed.size());
  for (size_t t = 0; t < exposed.size(); ++t)
    updated[t] =
        (!plan.burst_mask[t] || exposed[t] <= mu) ? exposed[t] : mu;
  return updated;
}

std::vector<UsageSeries> update_usage_multi(const MultiPlan& plan,
                                            const ExposedDemand& exposed,
                                            const ProviderSet& providers) {
  providers.validate();
  if (static_cast<int>(plan.provider_plans.size()) != providers.count())
    throw std::invalid_argument("realtime: plan/provider count mismatch");
  std::vector<UsageSeries> updated;
  updated.reserve(plan.provider_plans.size());
  for (int i = 0; i < providers.count(); ++i)
    updated.push_back(
        update_usage(plan.provider_plans[i], exposed, providers.policy_for(i)));
  return updated;
}

double realized_net_utility(const UsageSeries& updated, const UtilitySpec& spec,
                            double slot_seconds) {
  spec.validate();
  double total = 0.0;
  for (double x : updated) total += utility_value(spec, slot_seconds * x);
  return total;
}

double realized_surplus(const std::vector<UsageSeries>& updated,
                        const UtilitySpec& spec, const ProviderSet& providers) {
  providers.validate();
  if (static_cast<int>(updated.size()) != providers.count())
    throw std::invalid_argument("realtime: one usage series per provider");
  const size_t tau = static_cast<size_t>(providers.base.tau);
  UsageSeries total(tau, 0.0);
  for (const auto& series : updated) {
    if (series.size() != tau)
      throw std::invalid_argument("realtime: usage length mismatch");
    for (size_t t = 0; t < tau; ++t) total[t] += series[t];
  }
  double surplus =
      realized_net_utility(total, spec, providers.base.slot_seconds);
  for (int i = 0; i < providers.count(); ++i)
    surplus -= billing_cost(updated[i], providers.policy_for(i));
  return surplus;
}

double realized_surplus(const UsageSeries& updated, const UtilitySpec& spec,
                        const BillingPolicy& policy) {
  return realized_net_utility(updated, spec, policy.slot_seconds) -
         billing_cost(updated, policy);
}

namespace {

MethodResult finish_single(std::string name, UsageSeries updated,
                           const UtilitySpec& spec, const BillingPolicy& policy) {
  MethodResult out;
  out.method = std::move(name);
  out.mu95 = percentile_usage(updated, policy);
  out.realized_cost = policy.price_delta * out.mu95;
  out.realized_surplus =
      realized_net_utility(updated, spec, policy.slot_seconds) -
      out.realized_cost;
  out.updated_usage = std::move(updated);
  return out;
}

void normalize(CycleReport& report, double ideal) {
  report.ideal_surplus = ideal;
  const double base = std::max(std::abs(ideal), 1e-12);
  for (auto& m : report.methods) m.normalized_surplus = m.realized_surplus / base;
}

void check_methods(const std::vector<std::string>& methods,
                   const std::vector<std::string>& known) {
  if (methods.empty())
    throw std::invalid_argument("realtime: empty method list");
  for (const auto& m : methods)
    if (std::find(known.begin(), known.end(), m) == known.end())
      throw std::invalid_argument("realtime: unknown method '" + m + "'");
}

}  // namespace

CycleReport simulate_cycle(const ExposedDemand& truth,
                           const DemandScenario& forecast,
                           const UtilitySpec& spec, const BillingPolicy& policy,
                           const std::vector<std::string>& methods) {
  check_methods(methods, kSingleProviderMethods);
  if (static_cast<int>(truth.size()) != policy.tau)
    throw std::invalid_argument("realtime: truth length does not match tau");
  if (forecast.tau() != policy.tau)
    throw std::invalid_argument("realtime: forecast length does not match tau");

  const DemandScenario truth_scenario = DemandScenario::deterministic(truth);
  // Ideal is always computed: it is the normalization base.
  const Plan ideal_plan = solve_deterministic(truth_scenario, spec, policy);
  const MethodResult ideal = finish_single(
      "Ideal", update_usage(ideal_plan, truth, policy), spec, policy);

  CycleReport report;
  for (const auto& name : methods) {
    if (name == "Ideal") {
      report.methods.push_back(ideal);
    } else if (name == "Baseline") {
      report.methods.push_back(finish_single("Baseline", truth, spec, policy));
    } else if (name == "Deterministic") {
      const Plan plan = solve_deterministic(
          DemandScenario::deterministic(forecast.mean_demand()), spec, policy);
      report.methods.push_back(finish_single(
          "Deterministic", update_usage(plan, truth, policy), spec, policy));
    } else if (name == "Stochastic") {
      const Plan plan = solve_sweep(forecast, spec, policy);
      report.methods.push_back(finish_single(
          "Stochastic", update_usage(plan, truth, policy), spec, policy));
    }
  }
  normalize(report, ideal.realized_surplus);
  return report;
}

namespace {

MethodResult finish_multi(std::string name, const MultiPlan& plan,
                          const ExposedDemand& truth, const UtilitySpec& spec,
                          const ProviderSet& providers) {
  const auto updated = update_usage_multi(plan, truth, providers);
  MethodResult out;
  out.method = std::move(name);
  out.realized_surplus = realized_surplus(updated, spec, providers);
  out.realized_cost = 0.0;
  for (int i = 0; i < providers.count(); ++i)
    out.realized_cost += billing_cost(updated[i], providers.policy_for(i));
  const size_t tau = truth.size();
  out.updated_usage.assign(tau, 0.0);
  for (const auto& series : updated)
    for (size_t t = 0; t < tau; ++t) out.updated_usage[t] += series[t];
  out.mu95 = percentile_usage(out.updated_usage, providers.base);
  return out;
}

}  // namespace

CycleReport simulate_cycle_msp(const ExposedDemand& truth,
                               const DemandScenario& forecast,
                               const UtilitySpec& spec,
                               const ProviderSet& providers,
                               const std::vector<std::string>& methods) {
  check_methods(methods, kMultiProviderMethods);
  providers.validate();
  if (providers.count() < 2)
    throw std::invalid_argument("realtime: MSP comparison needs two providers");
  const BillingPolicy first = providers.policy_for(0);
  const DemandScenario truth_scenario = DemandScenario::deterministic(truth);
  const DemandScenario mean_scenario =
      DemandScenario::deterministic(forecast.mean_demand());

  const MultiPlan ideal_plan = solve_multi(truth_scenario, spec, providers);
  const MethodResult ideal =
      finish_multi("Ideal-MSP", ideal_plan, truth, spec, providers);

  CycleReport report;
  for (const auto& name : methods) {
    if (name == "Ideal-MSP") {
      report.methods.push_back(ideal);
    } else if (name == "Baseline-SSP") {
      report.methods.push_back(finish_single("Baseline-SSP", truth, spec, first));
    } else if (name == "Deterministic-SSP") {
      const Plan plan = solve_deterministic(mean_scenario, spec, first);
      report.methods.push_back(finish_single(
          "Deterministic-SSP", update_usage(plan, truth, first), spec, first));
    } else if (name == "Stochastic-SSP") {
      const Plan plan = solve_sweep(forecast, spec, first);
      report.methods.push_back(finish_single(
          "Stochastic-SSP", update_usage(plan, truth, first), spec, first));
    } else if (name == "Deterministic-MSP") {
      const MultiPlan plan = solve_multi(mean_scenario, spec, providers);
      report.methods.push_back(
          finish_multi("Deterministic-MSP", plan, truth, spec, providers));
    } else if (name == "Stochastic-MSP") {
      const MultiPlan plan = solve_multi(forecast, spec, providers);
      report.methods.push_back(
          finish_multi("Stochastic-MSP", plan, truth, spec, providers));
    }
  }
  normalize(report, ideal.realized_surplus);
  return report;
}

nlohmann::json cycle_report_to_json(const CycleReport& report) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : report.methods)
    methods.push_back({{"method", m.method},
                       {"realized_cost", m.realized_cost},
                       {"realized_surplus", m.realized_surplus},
                       {"normalized_surplus", m.normalized_surplus},
                       {"mu95", m.mu95}});
  return {{"ideal_surplus", report.ideal_surplus},
          {"methods", std::move(methods)}};
}

}  // namespace burstopt
