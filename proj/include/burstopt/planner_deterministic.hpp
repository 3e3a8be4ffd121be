#pragma once

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/utility.hpp"

namespace burstopt {

/// Exempt mask for a known demand vector: the burst budget lands on the
/// largest demands (earliest index on ties), everything else is counted.
BurstMask select_free_slots(const std::vector<double>& demand,
                            const BillingPolicy& policy);

/// Exact optimum under a single-realization scenario: serve full demand on
/// exempt slots, cap the rest at the maximizer of the one-dimensional concave
/// cap objective. Requires every slot to have exactly one realization.
Plan solve_deterministic(const DemandScenario& scenario, const UtilitySpec& spec,
                         const BillingPolicy& policy, double tol_rel = 1e-9);

/// Expected net utility, percentile cost, and surplus of an arbitrary usage
/// vector under a (possibly stochastic) scenario. Shared by every solver so
/// reported surpluses always come from the same accounting.
SurplusBreakdown evaluate_expected_surplus(const UsageSeries& usage,
                                           const DemandScenario& scenario,
                                           const UtilitySpec& spec,
                                           const BillingPolicy& policy);

}  // namespace burstopt
