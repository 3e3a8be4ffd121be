#include "burstopt/planner_stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "burstopt/common.hpp"
#include "burstopt/detail/plan_assembly.hpp"
#include "burstopt/detail/sweep_core.hpp"

namespace burstopt {

namespace {

constexpr int kOracleTauGuard = 20;

void check_inputs(const DemandScenario& scenario, const UtilitySpec& spec,
                  const BillingPolicy& policy) {
  policy.validate();
  spec.validate();
  scenario.validate();
  if (scenario.tau() != policy.tau)
    throw std::invalid_argument("planner: scenario length does not match tau");
}

// Advances `subset` (ascending indices into [0, n)) to the next combination;
// returns false after the last one.
bool next_combination(std::vector<int>& subset, int n) {
  const int m = static_cast<int>(subset.size());
  for (int i = m - 1; i >= 0; --i) {
    if (subset[i] < n - (m - i)) {
      ++subset[i];
      for (int j = i + 1; j < m; ++j) subset[j] = subset[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

Plan solve_sweep(const DemandScenario& scenario, const UtilitySpec& spec,
                 const BillingPolicy& policy, double tol_rel) {
  check_inputs(scenario, spec, policy);
  const auto curves =
      detail::scenario_curves(scenario.slots, spec, policy.slot_seconds);
  const auto result =
      detail::sweep_caps(curves, spec, policy.slot_seconds, policy.price_delta,
                         policy.burst_budget(), tol_rel);
  return detail::assemble_plan(curves, result.mask, result.cap, scenario, spec,
                               policy, "sweep");
}

Plan solve_oracle(const DemandScenario& scenario, const UtilitySpec& spec,
                  const BillingPolicy& policy, const OracleOptions& options,
                  double tol_rel) {
  check_inputs(scenario, spec, policy);
  const int tau = policy.tau;
  if (tau > kOracleTauGuard)
    throw SolverGuardError(
        "oracle: tau " + std::to_string(tau) + " exceeds the enumeration guard (" +
        std::to_string(kOracleTauGuard) +
        "); use the sweep solver or export an LP model instead");
  if (options.stop_gap && !(*options.stop_gap >= 0.0))
    throw std::invalid_argument("oracle: stop gap must be nonnegative");

  const auto curves =
      detail::scenario_curves(scenario.slots, spec, policy.slot_seconds);
  const int budget = policy.burst_budget();

  // Cheap global bound: every slot saturated, no bill.
  double upper = 0.0;
  for (const auto& c : curves) upper += c.full_util;

  std::vector<int> subset(budget);
  for (int i = 0; i < budget; ++i) subset[i] = i;

  double best_objective = -std::numeric_limits<double>::infinity();
  double best_cap = 0.0;
  BurstMask best_mask;
  bool stopped_early = false;
  while (true) {
    BurstMask mask(tau, 1);
    for (int idx : subset) mask[idx] = 0;
    const auto fixed = detail::maximize_fixed_mask(
        curves, mask, spec, policy.slot_seconds, policy.price_delta, tol_rel);
    if (fixed.objective > best_objective) {
      best_objective = fixed.objective;
      best_cap = fixed.cap;
      best_mask = std::move(mask);
    }
    if (options.stop_gap &&
        near_gap(std::min(best_objective, upper), upper) <= *options.stop_gap) {
      stopped_early = true;
      break;
    }
    if (budget == 0 || !next_combination(subset, tau)) break;
  }

  return detail::assemble_plan(curves, best_mask, best_cap, scenario, spec,
                               policy, stopped_early ? "oracle-near" : "oracle");
}

double near_gap(double lower_bound, double upper_bound) {
  if (!std::isfinite(lower_bound) || !std::isfinite(upper_bound))
    throw std::invalid_argument("near_gap: bounds must be finite");
  if (upper_bound < lower_bound)
    throw std::invalid_argument("near_gap: upper bound below lower bound");
  constexpr double kTiny = 1e-12;
  return (upper_bound - lower_bound) / std::max(std::abs(upper_bound), kTiny);
}

}  // namespace burstopt
