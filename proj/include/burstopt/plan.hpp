#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "burstopt/billing.hpp"

namespace burstopt {

/// One cycle's usage plan for a single provider. Invariants at construction:
/// the mask keeps exactly kept_count slots, capped usage never exceeds
/// cap_phi, cap_phi equals the largest capped usage, and expected_cost is the
/// billing module's percentile cost recomputed from planned_usage.
struct Plan {
  std::vector<double> planned_usage;  ///< X[t], Mbps
  BurstMask burst_mask;               ///< 1 = counted toward the percentile
  double cap_phi = 0.0;               ///< max usage over counted slots
  double expected_cost = 0.0;
  double expected_surplus = 0.0;
  std::string solver_tag;

  void validate(const BillingPolicy& policy) const;
};

struct SurplusBreakdown {
  double surplus = 0.0;
  double cost = 0.0;
  double net_utility = 0.0;
};

nlohmann::json plan_to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& j);

}  // namespace burstopt
