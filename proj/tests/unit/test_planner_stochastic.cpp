#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "burstopt/common.hpp"
#include "burstopt/planner_deterministic.hpp"
#include "burstopt/planner_stochastic.hpp"
#include "support/instances.hpp"

using namespace burstopt;
using namespace burstopt::testsupport;

namespace {

BillingPolicy small_policy(int tau, double delta, double q = 0.95,
                           double T = 1.0) {
  BillingPolicy p;
  p.tau = tau;
  p.slot_seconds = T;
  p.percentile_q = q;
  p.price_delta = delta;
  return p;
}

UtilitySpec spec_for(double A, double a) {
  UtilitySpec s;
  s.factor_A = A;
  s.curvature_a = a;
  return s;
}

}  // namespace

TEST_CASE("sweep collapses to the deterministic solver on point masses") {
  detail::SplitMix64 rng(404);
  for (int i = 0; i < 10; ++i) {
    const BillingPolicy policy = small_policy(20, rng.uniform(0.0, 20.0));
    const UtilitySpec spec = spec_for(0.8, 0.5);
    const auto demand = random_series(rng, 20, 40.0);
    const DemandScenario scenario = DemandScenario::deterministic(demand);
    const Plan det = solve_deterministic(scenario, spec, policy);
    const Plan sweep = solve_sweep(scenario, spec, policy);
    CHECK(sweep.expected_surplus ==
          doctest::Approx(det.expected_surplus).epsilon(1e-8));
  }
}

TEST_CASE("sweep and oracle agree on small stochastic instances") {
  detail::SplitMix64 rng(505);
  const double qs[] = {0.6, 0.75, 0.9, 0.95, 1.0};
  for (int i = 0; i < 60; ++i) {
    const int tau = 4 + static_cast<int>(rng.below(9));
    const BillingPolicy policy =
        small_policy(tau, rng.uniform(0.0, 10.0), qs[rng.below(5)]);
    const UtilitySpec spec =
        spec_for(rng.uniform(0.1, 1.5), rng.uniform(0.1, 1.0));
    const DemandScenario scenario = random_scenario(rng, tau, 3, 30.0);
    const Plan sweep = solve_sweep(scenario, spec, policy);
    const Plan oracle = solve_oracle(scenario, spec, policy);
    const double slack = 1e-6 * std::max(1.0, std::abs(oracle.expected_surplus));
    CHECK(sweep.expected_surplus >= oracle.expected_surplus - slack);
    CHECK(oracle.expected_surplus >= sweep.expected_surplus - slack);
    sweep.validate(policy);
    oracle.validate(policy);
  }
}

TEST_CASE("no burst budget means a pure cap problem") {
  detail::SplitMix64 rng(19);
  const BillingPolicy policy = small_policy(19, 4.0);
  REQUIRE(policy.burst_budget() == 0);
  const UtilitySpec spec = spec_for(1.0, 0.5);
  const DemandScenario scenario = random_scenario(rng, 19, 2, 20.0);
  const Plan plan = solve_sweep(scenario, spec, policy);
  for (auto m : plan.burst_mask) CHECK(m == 1);
  plan.validate(policy);
}

TEST_CASE("oracle guard rejects large instances") {
  detail::SplitMix64 rng(3);
  const DemandScenario scenario = random_scenario(rng, 25, 2, 10.0);
  CHECK_THROWS_AS(
      solve_oracle(scenario, spec_for(1.0, 0.5), small_policy(25, 1.0)),
      SolverGuardError);
}

TEST_CASE("oracle at zero price saturates every slot") {
  detail::SplitMix64 rng(8);
  const BillingPolicy policy = small_policy(10, 0.0, 0.8);
  const UtilitySpec spec = spec_for(1.0, 0.5);
  const DemandScenario scenario = random_scenario(rng, 10, 2, 15.0);
  const Plan plan = solve_oracle(scenario, spec, policy);
  const auto max_demand = scenario.max_demand();
  double expected = 0.0;
  for (int t = 0; t < 10; ++t) {
    CHECK(plan.planned_usage[t] ==
          doctest::Approx(max_demand[t]).epsilon(1e-9));
    expected +=
        expected_slot_utility(spec, scenario.slots[t], 1.0, max_demand[t]);
  }
  CHECK(plan.expected_surplus == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("two-slot instance against the stationarity condition") {
  // With no exempt slots and both demands above the cap, the optimum solves
  // U'(T*cap) * T * #unsaturated = delta.
  BillingPolicy policy = small_policy(2, 1.0);
  REQUIRE(policy.burst_budget() == 0);
  const UtilitySpec spec = spec_for(1.0, 0.5);
  DemandScenario scenario;
  scenario.slots = {{{100.0, 1.0}}, {{100.0, 1.0}}};
  const Plan plan = solve_oracle(scenario, spec, policy);
  // U'(c)*2 = 1 with U' = c^-0.5 gives c = 4.
  CHECK(plan.cap_phi == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(plan.planned_usage[0] == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("dominant slot is freed in some optimum") {
  const BillingPolicy policy = small_policy(20, 2.0);
  const UtilitySpec spec = spec_for(1.0, 0.5);
  DemandScenario scenario;
  scenario.slots.assign(20, {{2.0, 0.5}, {4.0, 0.5}});
  scenario.slots[7] = {{50.0, 0.5}, {80.0, 0.5}};
  const Plan plan = solve_oracle(scenario, spec, policy);
  CHECK(plan.burst_mask[7] == 0);
}

TEST_CASE("oracle early stop honors the bound gap") {
  detail::SplitMix64 rng(21);
  const BillingPolicy policy = small_policy(12, 0.05, 0.75);
  const UtilitySpec spec = spec_for(1.0, 0.3);
  const DemandScenario scenario = random_scenario(rng, 12, 2, 10.0);
  OracleOptions options;
  options.stop_gap = 0.5;  // loose enough to trigger on cheap instances
  const Plan plan = solve_oracle(scenario, spec, policy, options);
  CHECK((plan.solver_tag == "oracle-near" || plan.solver_tag == "oracle"));
  const Plan exact = solve_oracle(scenario, spec, policy);
  CHECK(plan.expected_surplus >=
        (1.0 - 0.5) * exact.expected_surplus - 1e-9);
}

TEST_CASE("stochastic plan beats the deterministic plan on its own scenario") {
  detail::SplitMix64 rng(606);
  for (int i = 0; i < 20; ++i) {
    const int tau = 6 + static_cast<int>(rng.below(8));
    const BillingPolicy policy =
        small_policy(tau, rng.uniform(0.5, 8.0), 0.85);
    const UtilitySpec spec = spec_for(1.0, 0.5);
    const DemandScenario scenario = random_scenario(rng, tau, 3, 25.0);
    const Plan stochastic = solve_sweep(scenario, spec, policy);
    const Plan deterministic = solve_deterministic(
        DemandScenario::deterministic(scenario.mean_demand()), spec, policy);
    const double det_under_truth =
        evaluate_expected_surplus(deterministic.planned_usage, scenario, spec,
                                  policy)
            .surplus;
    CHECK(stochastic.expected_surplus >= det_under_truth - 1e-9);
  }
}

TEST_CASE("near gap") {
  CHECK(near_gap(95.0, 100.0) == doctest::Approx(0.05));
  CHECK(near_gap(7.0, 7.0) == 0.0);
  CHECK(near_gap(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(near_gap(2.0, 1.0), std::invalid_argument);
}
