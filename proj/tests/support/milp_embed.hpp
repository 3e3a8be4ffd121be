#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/milp.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/utility.hpp"

namespace burstopt::testsupport {

/// Embeds a plan into a single-provider model's variable space: usage and
/// mask as planned, the cap at the plan's own percentile, served volume at
/// min(usage, demand), and the utility stand-ins at the tangent envelope.
inline std::vector<double> embed_plan(const MilpModel& model, const Plan& plan,
                                      const DemandScenario& scenario,
                                      const UtilitySpec& spec,
                                      const BillingPolicy& policy,
                                      int tangents) {
  std::vector<double> assignment(model.variables.size(), 0.0);
  const int tau = policy.tau;
  for (int t = 0; t < tau; ++t) {
    assignment[model.index_of("x_" + std::to_string(t + 1))] =
        plan.planned_usage[t];
    assignment[model.index_of("rho_" + std::to_string(t + 1))] =
        plan.burst_mask[t] ? 1.0 : 0.0;
  }
  assignment[model.index_of("phi")] =
      percentile_usage(plan.planned_usage, policy);
  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k) {
      const double served =
          std::min(plan.planned_usage[t], scenario.slots[t][k].demand_mbps);
      const std::string suffix =
          "_" + std::to_string(t + 1) + "_" + std::to_string(k + 1);
      assignment[model.index_of("q" + suffix)] = served;
      const TangentSet envelope =
          tangent_envelope(spec, scenario.slots[t][k].demand_mbps,
                           policy.slot_seconds, tangents);
      assignment[model.index_of("h" + suffix)] =
          envelope.value_at(policy.slot_seconds * served);
    }
  return assignment;
}

}  // namespace burstopt::testsupport
