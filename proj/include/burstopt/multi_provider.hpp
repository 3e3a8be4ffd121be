#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/milp.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/utility.hpp"

namespace burstopt {

/// Providers sharing one cycle geometry and percentile but charging their own
/// bandwidth prices.
struct ProviderSet {
  BillingPolicy base;                ///< shared tau, slot length, percentile
  std::vector<double> price_deltas;  ///< one price per provider

  int count() const { return static_cast<int>(price_deltas.size()); }
  BillingPolicy policy_for(int provider) const;
  void validate() const;
};

/// Per-provider plans plus the aggregate accounting: utility is earned on the
/// summed usage, cost is billed per provider.
struct MultiPlan {
  std::vector<Plan> provider_plans;
  double expected_cost = 0.0;
  double expected_surplus = 0.0;
  std::vector<double> round_surplus;  ///< ascent trajectory, one entry per round
};

struct MultiSolveOptions {
  int rounds_max = 100;
  double tol_rel = 1e-8;
};

/// Block-coordinate ascent over providers: all load starts on the cheapest
/// provider (ties to the lowest id), then each provider's usage is re-solved
/// with the others held fixed, via the sweep solver on the shifted slot
/// curves. A block is only adopted when it improves the aggregate surplus, so
/// the trajectory is nondecreasing. Heuristic: certify externally via the
/// multi-provider LP export when a guarantee is needed.
MultiPlan solve_multi(const DemandScenario& scenario, const UtilitySpec& spec,
                      const ProviderSet& providers,
                      const MultiSolveOptions& options = {});

/// Exhaustive reference for two providers and tau <= 8: enumerates both
/// exempt-set choices and maximizes the jointly concave two-cap objective by
/// nested golden-section.
MultiPlan solve_multi_oracle(const DemandScenario& scenario,
                             const UtilitySpec& spec,
                             const ProviderSet& providers,
                             double tol_rel = 1e-9);

/// The single-provider linearization applied per provider with shared served
/// volumes: Q is bounded by the summed usage and by demand, each provider
/// carries its own cap, mask, and cardinality row.
MilpModel build_milp_multi(const DemandScenario& scenario,
                           const UtilitySpec& spec, const ProviderSet& providers,
                           int tangent_count,
                           std::optional<double> big_L = std::nullopt);

/// Aggregate accounting for arbitrary per-provider usage vectors.
SurplusBreakdown evaluate_multi_surplus(const std::vector<UsageSeries>& usages,
                                        const DemandScenario& scenario,
                                        const UtilitySpec& spec,
                                        const ProviderSet& providers);

nlohmann::json multiplan_to_json(const MultiPlan& plan,
                                 const ProviderSet& providers);

}  // namespace burstopt
