#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "burstopt/planner_deterministic.hpp"
#include "burstopt/realtime.hpp"
#include "support/instances.hpp"

using namespace burstopt;
using namespace burstopt::testsupport;

namespace {

BillingPolicy small_policy(int tau, double delta, double q = 0.9,
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

// Eq.-style planned surplus under the realized demand: utility of
// min(planned, exposed) against the planned bill.
double planned_surplus_at_truth(const Plan& plan, const ExposedDemand& truth,
                                const UtilitySpec& spec,
                                const BillingPolicy& policy) {
  double value =
      -policy.price_delta * percentile_usage(plan.planned_usage, policy);
  for (size_t t = 0; t < truth.size(); ++t)
    value += utility_value(
        spec, policy.slot_seconds * std::min(plan.planned_usage[t], truth[t]));
  return value;
}

}  // namespace

TEST_CASE("update rule cases") {
  const BillingPolicy policy = small_policy(20, 1.0);
  Plan plan;
  plan.planned_usage.assign(20, 80.0);
  plan.burst_mask.assign(20, 1);
  plan.burst_mask[0] = 0;
  plan.burst_mask[1] = 0;
  plan.planned_usage[0] = 200.0;
  plan.planned_usage[1] = 150.0;
  plan.cap_phi = 80.0;
  REQUIRE(percentile_usage(plan.planned_usage, policy) == 80.0);

  ExposedDemand exposed(20, 50.0);
  exposed[0] = 400.0;  // exempt: on demand regardless of magnitude
  exposed[2] = 100.0;  // counted, above the percentile: rate limited
  exposed[3] = 50.0;   // counted, below: on demand
  const UsageSeries updated = update_usage(plan, exposed, policy);
  CHECK(updated[0] == 400.0);
  CHECK(updated[2] == 80.0);
  CHECK(updated[3] == 50.0);
}

TEST_CASE("update never raises the percentile and never over-serves") {
  detail::SplitMix64 rng(2020);
  for (int i = 0; i < 200; ++i) {
    const int tau = 10 + static_cast<int>(rng.below(40));
    const BillingPolicy policy =
        small_policy(tau, rng.uniform(0.0, 5.0), 0.85);
    const Plan plan = random_structured_plan(rng, policy, 30.0);
    const ExposedDemand truth = random_series(rng, tau, 60.0);
    const UsageSeries updated = update_usage(plan, truth, policy);
    const double planned_mu = percentile_usage(plan.planned_usage, policy);
    CHECK(percentile_usage(updated, policy) <= planned_mu + 1e-12);
    for (int t = 0; t < tau; ++t) CHECK(updated[t] <= truth[t] + 1e-12);
  }
}

TEST_CASE("updating can only improve the realized surplus") {
  detail::SplitMix64 rng(2021);
  const UtilitySpec spec = spec_for(1.0, 0.5);
  for (int i = 0; i < 200; ++i) {
    const int tau = 10 + static_cast<int>(rng.below(30));
    const BillingPolicy policy = small_policy(tau, rng.uniform(0.0, 4.0), 0.8);
    const Plan plan = random_structured_plan(rng, policy, 25.0);
    const ExposedDemand truth = random_series(rng, tau, 50.0);
    const UsageSeries updated = update_usage(plan, truth, policy);
    const double after = realized_surplus(updated, spec, policy);
    const double before = planned_surplus_at_truth(plan, truth, spec, policy);
    CHECK(after >= before - 1e-9);
  }
}

TEST_CASE("multi-provider update applies the rule per provider") {
  const ProviderSet providers = [] {
    ProviderSet set;
    set.base = small_policy(20, 1.0, 0.9);
    set.price_deltas = {1.0, 2.0};
    return set;
  }();

  MultiPlan plan;
  plan.provider_plans.assign(2, Plan{});
  for (int i = 0; i < 2; ++i) {
    plan.provider_plans[i].planned_usage.assign(20, i == 0 ? 40.0 : 0.0);
    plan.provider_plans[i].burst_mask.assign(20, 1);
  }
  plan.provider_plans[0].burst_mask[3] = 0;
  plan.provider_plans[0].burst_mask[4] = 0;
  plan.provider_plans[1].burst_mask[3] = 0;
  plan.provider_plans[1].burst_mask[5] = 0;

  ExposedDemand exposed(20, 30.0);
  exposed[3] = 90.0;
  const auto updated = update_usage_multi(plan, exposed, providers);
  REQUIRE(updated.size() == 2);
  // Both exempt at slot 3: both serve the full exposed demand.
  CHECK(updated[0][3] == 90.0);
  CHECK(updated[1][3] == 90.0);
  // Provider 2 planned nothing: zero percentile rate-limits counted slots.
  CHECK(updated[1][0] == 0.0);
  CHECK(updated[1][5] == 30.0);  // its own exempt slot serves on demand
  // Provider 1 under its percentile serves on demand.
  CHECK(updated[0][0] == 30.0);
}

TEST_CASE("single-provider update is the two-provider rule with one entry") {
  detail::SplitMix64 rng(2022);
  const BillingPolicy policy = small_policy(15, 2.0, 0.8);
  const Plan plan = random_structured_plan(rng, policy, 20.0);
  const ExposedDemand truth = random_series(rng, 15, 40.0);
  MultiPlan wrapper;
  wrapper.provider_plans = {plan};
  ProviderSet one;
  one.base = policy;
  one.price_deltas = {policy.price_delta};
  const auto multi = update_usage_multi(wrapper, truth, one);
  CHECK(multi[0] == update_usage(plan, truth, policy));
}

TEST_CASE("realized surplus accounting") {
  const BillingPolicy policy = small_policy(10, 2.0);
  const UtilitySpec spec = spec_for(1.0, 0.5);
  SUBCASE("zero usage earns and costs nothing") {
    CHECK(realized_surplus(UsageSeries(10, 0.0), spec, policy) == 0.0);
  }
  SUBCASE("zero price leaves the plain net utility") {
    BillingPolicy free_policy = policy;
    free_policy.price_delta = 0.0;
    const UsageSeries usage(10, 4.0);
    CHECK(realized_surplus(usage, spec, free_policy) ==
          doctest::Approx(realized_net_utility(usage, spec, 1.0)));
  }
  SUBCASE("updated-equals-planned matches the expected-surplus path") {
    detail::SplitMix64 rng(5);
    const ExposedDemand truth = random_series(rng, 10, 20.0);
    Plan plan = random_structured_plan(rng, policy, 10.0);
    const UsageSeries updated = update_usage(plan, truth, policy);
    const DemandScenario degenerate = DemandScenario::deterministic(truth);
    const double via_expected =
        evaluate_expected_surplus(updated, degenerate, spec, policy).surplus;
    CHECK(realized_surplus(updated, spec, policy) ==
          doctest::Approx(via_expected).epsilon(1e-12));
  }
}

TEST_CASE("cycle simulation") {
  detail::SplitMix64 rng(303);
  const BillingPolicy policy = small_policy(20, 4.0, 0.9);
  const UtilitySpec spec = spec_for(1.0, 0.5);
  const std::vector<double> truth = random_series(rng, 20, 20.0);

  SUBCASE("perfect forecast collapses every optimized method onto Ideal") {
    const DemandScenario forecast = DemandScenario::deterministic(truth);
    const CycleReport report = simulate_cycle(truth, forecast, spec, policy);
    REQUIRE(report.methods.size() == 4);
    for (const auto& m : report.methods) {
      if (m.method == "Baseline") continue;
      CHECK(m.normalized_surplus == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("ideal normalizes to one and dominates") {
    const std::vector<double> h1 = random_series(rng, 20, 20.0);
    const std::vector<double> h2 = random_series(rng, 20, 20.0);
    const CycleReport report =
        simulate_cycle(truth, forecast_stochastic(h1, h2), spec, policy);
    for (const auto& m : report.methods) {
      if (m.method == "Ideal")
        CHECK(m.normalized_surplus == doctest::Approx(1.0));
      CHECK(m.realized_surplus <= report.ideal_surplus + 1e-9);
    }
  }
  SUBCASE("unknown method is rejected") {
    const DemandScenario forecast = DemandScenario::deterministic(truth);
    CHECK_THROWS_AS(
        simulate_cycle(truth, forecast, spec, policy, {"Sideways"}),
        std::invalid_argument);
    CHECK_THROWS_AS(simulate_cycle(truth, forecast, spec, policy, {}),
                    std::invalid_argument);
  }
}

TEST_CASE("msp cycle simulation normalizes by Ideal-MSP") {
  detail::SplitMix64 rng(304);
  ProviderSet providers;
  providers.base = small_policy(20, 3.0, 0.9);
  providers.price_deltas = {3.0, 3.0};
  const UtilitySpec spec = spec_for(1.0, 0.5);
  const std::vector<double> truth = random_series(rng, 20, 15.0);
  const std::vector<double> h1 = random_series(rng, 20, 15.0);
  const std::vector<double> h2 = random_series(rng, 20, 15.0);
  const CycleReport report = simulate_cycle_msp(
      truth, forecast_stochastic(h1, h2), spec, providers);
  REQUIRE(report.methods.size() == 6);
  CHECK(report.methods[0].method == "Ideal-MSP");
  CHECK(report.methods[0].normalized_surplus == doctest::Approx(1.0));
}
