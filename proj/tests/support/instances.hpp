#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/detail/prng.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/utility.hpp"

namespace burstopt::testsupport {

inline std::vector<double> random_series(detail::SplitMix64& rng, int n,
                                         double hi) {
  std::vector<double> out(n);
  for (auto& v : out) v = rng.uniform(0.0, hi);
  return out;
}

/// Random scenario with 1..k_max realizations per slot and demands in
/// [0, demand_hi]; probabilities are normalized positive weights.
inline DemandScenario random_scenario(detail::SplitMix64& rng, int tau,
                                      int k_max, double demand_hi) {
  DemandScenario scenario;
  scenario.slots.resize(tau);
  for (int t = 0; t < tau; ++t) {
    const int k_count = 1 + static_cast<int>(rng.below(k_max));
    std::vector<double> weights(k_count);
    double total = 0.0;
    for (auto& w : weights) {
      w = rng.uniform(0.1, 1.0);
      total += w;
    }
    for (int k = 0; k < k_count; ++k)
      scenario.slots[t].push_back(
          {rng.uniform(0.0, demand_hi), weights[k] / total});
  }
  return scenario;
}

/// A plan shaped like solver output: a random exempt set, capped usage below
/// a random cap (at least one slot touching it), exempt usage at or above the
/// cap. Satisfies the plan invariants including percentile == cap.
inline Plan random_structured_plan(detail::SplitMix64& rng,
                                   const BillingPolicy& policy, double hi) {
  const int tau = policy.tau;
  const int budget = policy.burst_budget();
  std::vector<double> key = random_series(rng, tau, 1.0);
  Plan plan;
  plan.burst_mask = top_value_mask(key, budget);
  const double cap = rng.uniform(0.1 * hi, hi);
  plan.planned_usage.resize(tau);
  int touch = -1;
  for (int t = 0; t < tau; ++t) {
    if (plan.burst_mask[t]) {
      plan.planned_usage[t] = rng.uniform(0.0, cap);
      if (touch < 0) touch = t;
    } else {
      plan.planned_usage[t] = rng.uniform(cap, 2.0 * hi);
    }
  }
  if (touch >= 0) plan.planned_usage[touch] = cap;
  plan.cap_phi = cap;
  plan.solver_tag = "test";
  return plan;
}

/// Test-side deterministic reference: enumerate every exempt subset of budget
/// size, and for each one scan the cap over a fine grid that is shrunk and
/// re-scanned around the best point. Evaluates the surplus directly from the
/// utility definition, independent of the solver machinery.
inline double brute_force_deterministic_surplus(const std::vector<double>& demand,
                                                const UtilitySpec& spec,
                                                const BillingPolicy& policy) {
  const int tau = policy.tau;
  const int budget = policy.burst_budget();
  const double T = policy.slot_seconds;
  std::vector<int> subset(budget);
  for (int i = 0; i < budget; ++i) subset[i] = i;

  auto surplus_for = [&](const std::vector<bool>& exempt, double cap) {
    double value = -policy.price_delta * cap;
    for (int t = 0; t < tau; ++t) {
      const double served = exempt[t] ? demand[t] : std::min(demand[t], cap);
      value += utility_value(spec, T * served);
    }
    return value;
  };

  auto next_combination = [&](std::vector<int>& s) {
    const int m = static_cast<int>(s.size());
    for (int i = m - 1; i >= 0; --i) {
      if (s[i] < tau - (m - i)) {
        ++s[i];
        for (int j = i + 1; j < m; ++j) s[j] = s[j - 1] + 1;
        return true;
      }
    }
    return false;
  };

  double best = -1e300;
  while (true) {
    std::vector<bool> exempt(tau, false);
    for (int idx : subset) exempt[idx] = true;
    double cap_hi = 0.0;
    for (int t = 0; t < tau; ++t)
      if (!exempt[t]) cap_hi = std::max(cap_hi, demand[t]);
    double lo = 0.0, hi = std::max(cap_hi, 1e-12);
    double arg_best = 0.0, val_best = surplus_for(exempt, 0.0);
    for (int round = 0; round < 12; ++round) {
      const int points = 64;
      for (int p = 0; p <= points; ++p) {
        const double cap = lo + (hi - lo) * p / points;
        const double value = surplus_for(exempt, cap);
        if (value > val_best) {
          val_best = value;
          arg_best = cap;
        }
      }
      const double step = (hi - lo) / points;
      lo = std::max(0.0, arg_best - step);
      hi = std::min(cap_hi, arg_best + step);
    }
    best = std::max(best, val_best);
    if (budget == 0 || !next_combination(subset)) break;
  }
  return best;
}

}  // namespace burstopt::testsupport
