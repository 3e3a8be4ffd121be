#include "burstopt/planner_deterministic.hpp"

#include <algorithm>
#include <stdexcept>

#include "burstopt/detail/plan_assembly.hpp"
#include "burstopt/detail/sweep_core.hpp"

namespace burstopt {

BurstMask select_free_slots(const std::vector<double>& demand,
                            const BillingPolicy& policy) {
  policy.validate();
  if (static_cast<int>(demand.size()) != policy.tau)
    throw std::invalid_argument("planner: demand length does not match tau");
  return top_value_mask(demand, policy.burst_budget());
}

namespace detail {

Plan assemble_plan(const std::vector<SlotCurve>& curves, const BurstMask& mask,
                   double cap, const DemandScenario& scenario,
                   const UtilitySpec& spec, const BillingPolicy& policy,
                   std::string tag) {
  Plan plan;
  plan.planned_usage = usage_for(curves, mask, cap);
  plan.burst_mask = mask;
  plan.cap_phi = 0.0;
  for (std::size_t t = 0; t < plan.planned_usage.size(); ++t)
    if (mask[t]) plan.cap_phi = std::max(plan.cap_phi, plan.planned_usage[t]);
  const SurplusBreakdown breakdown =
      evaluate_expected_surplus(plan.planned_usage, scenario, spec, policy);
  plan.expected_cost = breakdown.cost;
  plan.expected_surplus = breakdown.surplus;
  plan.solver_tag = std::move(tag);
  return plan;
}

}  // namespace detail

Plan solve_deterministic(const DemandScenario& scenario, const UtilitySpec& spec,
                         const BillingPolicy& policy, double tol_rel) {
  policy.validate();
  spec.validate();
  scenario.validate();
  if (scenario.tau() != policy.tau)
    throw std::invalid_argument("planner: scenario length does not match tau");
  if (!scenario.is_deterministic())
    throw std::invalid_argument(
        "planner: deterministic solver needs single-realization slots");

  const std::vector<double> demand = scenario.mean_demand();
  const BurstMask mask = select_free_slots(demand, policy);
  const auto curves =
      detail::scenario_curves(scenario.slots, spec, policy.slot_seconds);
  const auto fixed = detail::maximize_fixed_mask(
      curves, mask, spec, policy.slot_seconds, policy.price_delta, tol_rel);
  return detail::assemble_plan(curves, mask, fixed.cap, scenario, spec, policy,
                               "deterministic");
}

SurplusBreakdown evaluate_expected_surplus(const UsageSeries& usage,
                                           const DemandScenario& scenario,
                                           const UtilitySpec& spec,
                                           const BillingPolicy& policy) {
  policy.validate();
  spec.validate();
  scenario.validate();
  if (scenario.tau() != policy.tau ||
      usage.size() != static_cast<size_t>(policy.tau))
    throw std::invalid_argument("planner: usage/scenario length mismatch");
  SurplusBreakdown out;
  for (int t = 0; t < policy.tau; ++t)
    out.net_utility += expected_slot_utility(spec, scenario.slots[t],
                                             policy.slot_seconds, usage[t]);
  out.cost = billing_cost(usage, policy);
  out.surplus = out.net_utility - out.cost;
  return out;
}

}  // namespace burstopt
