#pragma once

#include <string>

#include "burstopt/demand.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/detail/sweep_core.hpp"

namespace burstopt::detail {

/// Builds a Plan from a solver's (mask, cap) decision: usage from the curves,
/// cap_phi as the largest counted usage, cost and surplus recomputed through
/// the billing and evaluation paths.
Plan assemble_plan(const std::vector<SlotCurve>& curves, const BurstMask& mask,
                   double cap, const DemandScenario& scenario,
                   const UtilitySpec& spec, const BillingPolicy& policy,
                   std::string tag);

}  // namespace burstopt::detail
