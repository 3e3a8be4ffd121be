#pragma once

#include <optional>

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/utility.hpp"

namespace burstopt {

/// Stochastic surplus maximizer built on the cap reformulation: the usage cap
/// is optimized directly over all per-slot realization breakpoints, freeing
/// the burst budget's worth of highest-gain slots at each candidate and
/// refining between candidates by golden-section with the exempt set frozen.
/// Exactness at scale is certified externally (oracle on small instances,
/// LP export otherwise).
Plan solve_sweep(const DemandScenario& scenario, const UtilitySpec& spec,
                 const BillingPolicy& policy, double tol_rel = 1e-9);

struct OracleOptions {
  /// Stop enumerating once the incumbent is within this bound-gap ratio of a
  /// cheap global upper bound (the paper-style early-stopping rule). The plan
  /// is then tagged "oracle-near".
  std::optional<double> stop_gap;
};

/// Exhaustive reference: enumerates every exempt subset of burst-budget size
/// and maximizes the concave cap objective for each. Guarded to tau <= 20.
Plan solve_oracle(const DemandScenario& scenario, const UtilitySpec& spec,
                  const BillingPolicy& policy, const OracleOptions& options = {},
                  double tol_rel = 1e-9);

/// Bound-gap ratio (upper - lower) / max(|upper|, tiny); requires
/// upper >= lower. A gap of 0.05 certifies at least 95% optimality.
double near_gap(double lower_bound, double upper_bound);

}  // namespace burstopt
