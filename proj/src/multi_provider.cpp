#include "burstopt/multi_provider.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "burstopt/common.hpp"
#include "burstopt/detail/numeric.hpp"
#include "burstopt/detail/sweep_core.hpp"

namespace burstopt {

namespace {

void check_inputs(const DemandScenario& scenario, const UtilitySpec& spec,
                  const ProviderSet& providers) {
  providers.validate();
  spec.validate();
  scenario.validate();
  if (scenario.tau() != providers.base.tau)
    throw std::invalid_argument("multi: scenario length does not match tau");
}

// Per-provider plan skeleton carrying zero usage; the mask still keeps the
// required number of slots (ties put the exempt zeros on the earliest ones).
Plan zero_plan(const BillingPolicy& policy) {
  Plan plan;
  plan.planned_usage.assign(policy.tau, 0.0);
  plan.burst_mask = top_value_mask(plan.planned_usage, policy.burst_budget());
  plan.cap_phi = 0.0;
  plan.expected_cost = 0.0;
  plan.expected_surplus = 0.0;
  plan.solver_tag = "multi-sweep";
  return plan;
}

double counted_max(const std::vector<double>& usage, const BurstMask& mask) {
  double cap = 0.0;
  for (size_t t = 0; t < usage.size(); ++t)
    if (mask[t]) cap = std::max(cap, usage[t]);
  return cap;
}

// Block objective for one provider with the others held fixed: shifted slot
// utility of its own usage minus its own percentile bill.
double block_value(const std::vector<detail::SlotCurve>& curves,
                   const std::vector<double>& usage, const BurstMask& /*mask*/,
                   const UtilitySpec& spec, const BillingPolicy& policy) {
  double value = -billing_cost(usage, policy);
  for (size_t t = 0; t < usage.size(); ++t)
    value += curves[t].eval(spec, policy.slot_seconds, usage[t]);
  return value;
}

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

BillingPolicy ProviderSet::policy_for(int provider) const {
  BillingPolicy policy = base;
  policy.price_delta = price_deltas.at(provider);
  return policy;
}

void ProviderSet::validate() const {
  base.validate();
  if (price_deltas.empty())
    throw std::invalid_argument("multi: need at least one provider");
  for (double d : price_deltas)
    if (d < 0.0)
      throw std::invalid_argument("multi: provider prices must be nonnegative");
}

SurplusBreakdown evaluate_multi_surplus(const std::vector<UsageSeries>& usages,
                                        const DemandScenario& scenario,
                                        const UtilitySpec& spec,
                                        const ProviderSet& providers) {
  check_inputs(scenario, spec, providers);
  if (static_cast<int>(usages.size()) != providers.count())
    throw std::invalid_argument("multi: one usage series per provider required");
  const int tau = providers.base.tau;
  std::vector<double> total(tau, 0.0);
  for (const auto& usage : usages) {
    if (static_cast<int>(usage.size()) != tau)
      throw std::invalid_argument("multi: usage length does not match tau");
    for (int t = 0; t < tau; ++t) total[t] += usage[t];
  }
  SurplusBreakdown out;
  for (int t = 0; t < tau; ++t)
    out.net_utility += expected_slot_utility(
        spec, scenario.slots[t], providers.base.slot_seconds, total[t]);
  for (int i = 0; i < providers.count(); ++i)
    out.cost += billing_cost(usages[i], providers.policy_for(i));
  out.surplus = out.net_utility - out.cost;
  return out;
}

namespace {

// One ascent run with every slot's load seeded on `seed_provider`.
MultiPlan run_ascent(const DemandScenario& scenario, const UtilitySpec& spec,
                     const ProviderSet& providers,
                     const MultiSolveOptions& options, int seed_provider) {
  const int provider_count = providers.count();
  const int tau = providers.base.tau;
  const int budget = providers.base.burst_budget();
  const double T = providers.base.slot_seconds;
  // options.tol_rel governs the ascent stopping rule; the per-block cap
  // search keeps the solver-wide golden-section tolerance.
  constexpr double kSweepTol = 1e-9;

  MultiPlan result;
  result.provider_plans.assign(provider_count, Plan{});
  for (int i = 0; i < provider_count; ++i)
    result.provider_plans[i] = zero_plan(providers.policy_for(i));

  {
    const auto curves = detail::scenario_curves(scenario.slots, spec, T);
    const auto seed = detail::sweep_caps(curves, spec, T,
                                         providers.price_deltas[seed_provider],
                                         budget, kSweepTol);
    result.provider_plans[seed_provider].planned_usage = seed.usage;
    result.provider_plans[seed_provider].burst_mask = seed.mask;
  }

  auto usages = [&] {
    std::vector<UsageSeries> u;
    for (const auto& p : result.provider_plans) u.push_back(p.planned_usage);
    return u;
  };

  double surplus =
      evaluate_multi_surplus(usages(), scenario, spec, providers).surplus;
  result.round_surplus.push_back(surplus);

  std::vector<double> shifts(tau);
  for (int round = 0; round < options.rounds_max; ++round) {
    for (int i = 0; i < provider_count; ++i) {
      std::fill(shifts.begin(), shifts.end(), 0.0);
      for (int j = 0; j < provider_count; ++j) {
        if (j == i) continue;
        for (int t = 0; t < tau; ++t)
          shifts[t] += result.provider_plans[j].planned_usage[t];
      }
      const auto curves =
          detail::scenario_curves(scenario.slots, spec, T, &shifts);
      const auto block = detail::sweep_caps(
          curves, spec, T, providers.price_deltas[i], budget, kSweepTol);
      const BillingPolicy policy_i = providers.policy_for(i);
      Plan& plan = result.provider_plans[i];
      const double value_old =
          block_value(curves, plan.planned_usage, plan.burst_mask, spec, policy_i);
      const double value_new =
          block_value(curves, block.usage, block.mask, spec, policy_i);
      if (value_new > value_old) {
        plan.planned_usage = block.usage;
        plan.burst_mask = block.mask;
      }
    }
    const double next =
        evaluate_multi_surplus(usages(), scenario, spec, providers).surplus;
    result.round_surplus.push_back(next);
    const bool converged = next - surplus <= options.tol_rel * (1.0 + std::abs(next));
    surplus = std::max(surplus, next);
    if (converged) break;
  }

  const SurplusBreakdown aggregate =
      evaluate_multi_surplus(usages(), scenario, spec, providers);
  result.expected_cost = aggregate.cost;
  result.expected_surplus = aggregate.surplus;
  return result;
}

}  // namespace

MultiPlan solve_multi(const DemandScenario& scenario, const UtilitySpec& spec,
                      const ProviderSet& providers,
                      const MultiSolveOptions& options) {
  check_inputs(scenario, spec, providers);
  if (options.rounds_max < 1)
    throw std::invalid_argument("multi: rounds_max must be >= 1");
  const int provider_count = providers.count();
  const int tau = providers.base.tau;
  const double T = providers.base.slot_seconds;

  const int cheapest = static_cast<int>(
      std::min_element(providers.price_deltas.begin(),
                       providers.price_deltas.end()) -
      providers.price_deltas.begin());

  // Canonical start carries all load on the cheapest provider; the other
  // seedings only replace it when they end strictly higher, which keeps the
  // result deterministic and blunts single-start local optima.
  MultiPlan result = run_ascent(scenario, spec, providers, options, cheapest);
  for (int seed = 0; seed < provider_count; ++seed) {
    if (seed == cheapest) continue;
    MultiPlan alt = run_ascent(scenario, spec, providers, options, seed);
    if (alt.expected_surplus > result.expected_surplus) result = std::move(alt);
  }

  std::vector<double> shifts(tau);
  for (int i = 0; i < provider_count; ++i) {
    Plan& plan = result.provider_plans[i];
    const BillingPolicy policy_i = providers.policy_for(i);
    plan.cap_phi = counted_max(plan.planned_usage, plan.burst_mask);
    plan.expected_cost = billing_cost(plan.planned_usage, policy_i);
    plan.solver_tag = "multi-sweep";
    // Marginal surplus with the other providers held fixed.
    std::fill(shifts.begin(), shifts.end(), 0.0);
    for (int j = 0; j < provider_count; ++j) {
      if (j == i) continue;
      for (int t = 0; t < tau; ++t)
        shifts[t] += result.provider_plans[j].planned_usage[t];
    }
    const auto curves = detail::scenario_curves(scenario.slots, spec, T, &shifts);
    // Marginal contribution: the shifted utility net of what the other
    // providers already deliver at zero own usage.
    plan.expected_surplus =
        block_value(curves, plan.planned_usage, plan.burst_mask, spec, policy_i);
    for (const auto& curve : curves)
      plan.expected_surplus -= curve.eval(spec, T, 0.0);
  }

  std::vector<UsageSeries> final_usages;
  for (const auto& p : result.provider_plans)
    final_usages.push_back(p.planned_usage);
  const SurplusBreakdown aggregate =
      evaluate_multi_surplus(final_usages, scenario, spec, providers);
  result.expected_cost = aggregate.cost;
  result.expected_surplus = aggregate.surplus;
  return result;
}

MultiPlan solve_multi_oracle(const DemandScenario& scenario,
                             const UtilitySpec& spec,
                             const ProviderSet& providers, double tol_rel) {
  check_inputs(scenario, spec, providers);
  if (providers.count() != 2)
    throw SolverGuardError("multi oracle: exactly two providers supported");
  const int tau = providers.base.tau;
  if (tau > 8)
    throw SolverGuardError(
        "multi oracle: tau " + std::to_string(tau) +
        " exceeds the enumeration guard (8); use solve_multi or LP export");

  const double T = providers.base.slot_seconds;
  const double d0 = providers.price_deltas[0];
  const double d1 = providers.price_deltas[1];
  const int budget = providers.base.burst_budget();
  const auto curves = detail::scenario_curves(scenario.slots, spec, T);

  double sat_hi = 0.0;
  for (const auto& c : curves) sat_hi = std::max(sat_hi, c.x_sat);
  const double tol_abs = tol_rel * (1.0 + sat_hi);

  struct BestPick {
    double objective = -std::numeric_limits<double>::infinity();
    BurstMask mask0, mask1;
    double cap0 = 0.0, cap1 = 0.0;
  } best;

  std::vector<int> subset0(budget);
  for (int i = 0; i < budget; ++i) subset0[i] = i;
  while (true) {
    BurstMask mask0(tau, 1);
    for (int idx : subset0) mask0[idx] = 0;
    std::vector<int> subset1(budget);
    for (int i = 0; i < budget; ++i) subset1[i] = i;
    while (true) {
      BurstMask mask1(tau, 1);
      for (int idx : subset1) mask1[idx] = 0;

      // Slots exempt for either provider are served in full for free.
      double free_const = 0.0;
      std::vector<int> capped;
      for (int t = 0; t < tau; ++t) {
        if (!mask0[t] || !mask1[t])
          free_const += curves[t].full_util;
        else
          capped.push_back(t);
      }
      auto joint = [&](double cap0, double cap1) {
        double value = free_const - d0 * cap0 - d1 * cap1;
        for (int t : capped) value += curves[t].eval(spec, T, cap0 + cap1);
        return value;
      };
      auto inner_best = [&](double cap0) {
        return detail::golden_section_max(
            [&](double cap1) { return joint(cap0, cap1); }, 0.0, sat_hi,
            tol_abs);
      };
      const auto outer = detail::golden_section_max(
          [&](double cap0) { return inner_best(cap0).value; }, 0.0, sat_hi,
          tol_abs);
      double cap0 = outer.arg;
      double cap1 = inner_best(outer.arg).arg;
      double value = joint(cap0, cap1);
      // Breakpoint candidates with the whole cap on one provider catch kinks.
      for (int t : capped) {
        for (double d : curves[t].demands) {
          if (d <= 0.0) continue;
          if (const double v = joint(d, 0.0); v > value) {
            value = v;
            cap0 = d;
            cap1 = 0.0;
          }
          if (const double v = joint(0.0, d); v > value) {
            value = v;
            cap0 = 0.0;
            cap1 = d;
          }
        }
      }
      if (const double v = joint(0.0, 0.0); v > value) {
        value = v;
        cap0 = cap1 = 0.0;
      }

      if (value > best.objective) {
        best = {value, mask0, mask1, cap0, cap1};
      }
      if (budget == 0 || !next_combination(subset1, tau)) break;
    }
    if (budget == 0 || !next_combination(subset0, tau)) break;
  }

  // Reconstruct per-provider usage from the winning masks and caps.
  MultiPlan result;
  result.provider_plans.assign(2, Plan{});
  std::vector<UsageSeries> usage(2, UsageSeries(tau, 0.0));
  for (int t = 0; t < tau; ++t) {
    const double sat = curves[t].x_sat;
    const bool free0 = !best.mask0[t];
    const bool free1 = !best.mask1[t];
    if (free0) {
      usage[0][t] = sat;
    } else if (free1) {
      usage[1][t] = sat;
    } else {
      const double total = std::min(best.cap0 + best.cap1, sat);
      usage[0][t] = std::min(best.cap0, total);
      usage[1][t] = total - usage[0][t];
    }
  }
  for (int i = 0; i < 2; ++i) {
    Plan& plan = result.provider_plans[i];
    plan.planned_usage = usage[i];
    plan.burst_mask = i == 0 ? best.mask0 : best.mask1;
    plan.cap_phi = counted_max(plan.planned_usage, plan.burst_mask);
    plan.expected_cost = billing_cost(plan.planned_usage, providers.policy_for(i));
    plan.solver_tag = "multi-oracle";
  }
  const SurplusBreakdown aggregate =
      evaluate_multi_surplus(usage, scenario, spec, providers);
  result.expected_cost = aggregate.cost;
  result.expected_surplus = aggregate.surplus;
  result.provider_plans[0].expected_surplus = aggregate.surplus;
  result.provider_plans[1].expected_surplus = aggregate.surplus;
  result.round_surplus.push_back(aggregate.surplus);
  return result;
}

MilpModel build_milp_multi(const DemandScenario& scenario,
                           const UtilitySpec& spec, const ProviderSet& providers,
                           int tangent_count, std::optional<double> big_L) {
  check_inputs(scenario, spec, providers);
  if (tangent_count < 1)
    throw std::invalid_argument("milp: tangent count must be >= 1");
  const int tau = providers.base.tau;
  const int provider_count = providers.count();

  double max_demand = 0.0;
  for (const auto& slot : scenario.slots)
    for (const auto& pm : slot) max_demand = std::max(max_demand, pm.demand_mbps);
  const double L = big_L ? *big_L : max_demand + 1.0;
  if (L < max_demand)
    throw std::invalid_argument("milp: big_L below the largest realization");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  MilpModel model;
  model.big_L = L;
  auto add_var = [&](std::string name, double lower, double upper, bool binary,
                     bool free_var = false) {
    model.variables.push_back({std::move(name), lower, upper, binary, free_var});
    return static_cast<int>(model.variables.size()) - 1;
  };
  auto tag = [](int i, int t) {
    return std::to_string(i + 1) + "_" + std::to_string(t + 1);
  };

  std::vector<std::vector<int>> x_idx(provider_count, std::vector<int>(tau));
  std::vector<std::vector<int>> rho_idx(provider_count, std::vector<int>(tau));
  std::vector<int> phi_idx(provider_count);
  for (int i = 0; i < provider_count; ++i)
    for (int t = 0; t < tau; ++t)
      x_idx[i][t] = add_var("x_" + tag(i, t), 0.0, kInf, false);
  for (int i = 0; i < provider_count; ++i)
    for (int t = 0; t < tau; ++t)
      rho_idx[i][t] = add_var("rho_" + tag(i, t), 0.0, 1.0, true);
  for (int i = 0; i < provider_count; ++i)
    phi_idx[i] = add_var("phi_" + std::to_string(i + 1), 0.0, kInf, false);
  std::vector<std::vector<int>> q_idx(tau), h_idx(tau);
  for (int t = 0; t < tau; ++t) {
    const int k_count = static_cast<int>(scenario.slots[t].size());
    q_idx[t].resize(k_count);
    h_idx[t].resize(k_count);
    for (int k = 0; k < k_count; ++k)
      q_idx[t][k] = add_var(
          "q_" + std::to_string(t + 1) + "_" + std::to_string(k + 1), 0.0, kInf,
          false);
    for (int k = 0; k < k_count; ++k)
      h_idx[t][k] =
          add_var("h_" + std::to_string(t + 1) + "_" + std::to_string(k + 1),
                  -kInf, kInf, false, true);
  }

  for (int i = 0; i < provider_count; ++i)
    for (int t = 0; t < tau; ++t)
      model.rows.push_back(
          {"cap_" + tag(i, t),
           {{x_idx[i][t], 1.0}, {phi_idx[i], -1.0}, {rho_idx[i][t], L}},
           RowSense::LessEqual,
           L});
  for (int i = 0; i < provider_count; ++i) {
    MilpRow card{"card_" + std::to_string(i + 1), {}, RowSense::Equal,
                 static_cast<double>(providers.base.kept_count())};
    for (int t = 0; t < tau; ++t) card.terms.push_back({rho_idx[i][t], 1.0});
    model.rows.push_back(std::move(card));
  }
  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k) {
      MilpRow row{"qx_" + std::to_string(t + 1) + "_" + std::to_string(k + 1),
                  {{q_idx[t][k], 1.0}},
                  RowSense::LessEqual,
                  0.0};
      for (int i = 0; i < provider_count; ++i)
        row.terms.push_back({x_idx[i][t], -1.0});
      model.rows.push_back(std::move(row));
    }
  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k)
      model.rows.push_back(
          {"qd_" + std::to_string(t + 1) + "_" + std::to_string(k + 1),
           {{q_idx[t][k], 1.0}},
           RowSense::LessEqual,
           scenario.slots[t][k].demand_mbps});
  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k) {
      const TangentSet envelope =
          tangent_envelope(spec, scenario.slots[t][k].demand_mbps,
                           providers.base.slot_seconds, tangent_count);
      for (size_t n = 0; n < envelope.lines.size(); ++n)
        model.rows.push_back(
            {"tan_" + std::to_string(t + 1) + "_" + std::to_string(k + 1) +
                 "_" + std::to_string(n + 1),
             {{h_idx[t][k], 1.0},
              {q_idx[t][k],
               -envelope.lines[n].slope * providers.base.slot_seconds}},
             RowSense::LessEqual,
             envelope.lines[n].intercept});
    }

  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k)
      model.objective.push_back({h_idx[t][k], scenario.slots[t][k].prob});
  for (int i = 0; i < provider_count; ++i)
    model.objective.push_back({phi_idx[i], -providers.price_deltas[i]});
  model.maximize = true;
  return model;
}

nlohmann::json multiplan_to_json(const MultiPlan& plan,
                                 const ProviderSet& providers) {
  nlohmann::json provider_blocks = nlohmann::json::array();
  for (size_t i = 0; i < plan.provider_plans.size(); ++i)
    provider_blocks.push_back(
        {{"id", i + 1},
         {"price_delta", providers.price_deltas.at(i)},
         {"plan", plan_to_json(plan.provider_plans[i])}});
  return {{"providers", std::move(provider_blocks)},
          {"expected_cost", plan.expected_cost},
          {"expected_surplus", plan.expected_surplus}};
}

}  // namespace burstopt
