#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <numeric>

#include "burstopt/billing.hpp"
#include "burstopt/detail/prng.hpp"

using namespace burstopt;

namespace {

BillingPolicy policy_for(int tau, double q = 0.95, double delta = 15.0) {
  BillingPolicy p;
  p.tau = tau;
  p.percentile_q = q;
  p.price_delta = delta;
  return p;
}

std::vector<double> ascending(int n) {
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

}  // namespace

TEST_CASE("burst budget follows the ceiling rule") {
  CHECK(burst_budget(policy_for(8640)) == 432);
  CHECK(burst_budget(policy_for(20)) == 1);
  CHECK(burst_budget(policy_for(19)) == 0);
  CHECK(burst_budget(policy_for(672)) == 33);
  CHECK(burst_budget(policy_for(100, 1.0)) == 0);
}

TEST_CASE("policy validation") {
  CHECK_THROWS_AS(burst_budget(policy_for(0)), std::invalid_argument);
  CHECK_THROWS_AS(burst_budget(policy_for(10, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(burst_budget(policy_for(10, 1.5)), std::invalid_argument);
  CHECK_THROWS_AS(burst_budget(policy_for(10, 0.95, -1.0)),
                  std::invalid_argument);
}

TEST_CASE("percentile of a constant series is the constant") {
  const BillingPolicy policy = policy_for(40);
  const UsageSeries series(40, 100.0);
  CHECK(percentile_usage(series, policy) == 100.0);
}

TEST_CASE("percentile drops the burst budget's worth of top samples") {
  const BillingPolicy policy = policy_for(20);
  CHECK(percentile_usage(ascending(20), policy) == 19.0);
}

TEST_CASE("length mismatch is rejected") {
  const BillingPolicy policy = policy_for(20);
  CHECK_THROWS_AS(percentile_usage(ascending(19), policy),
                  std::invalid_argument);
}

TEST_CASE("mask form places zeros on the largest samples") {
  const BillingPolicy policy = policy_for(20);
  const auto out = percentile_usage_via_mask(ascending(20), policy);
  CHECK(out.value == 19.0);
  for (int t = 0; t < 19; ++t) CHECK(out.mask[t] == 1);
  CHECK(out.mask[19] == 0);
}

TEST_CASE("mask ties discard the earliest slots first") {
  const BillingPolicy policy = policy_for(40);
  const auto out = percentile_usage_via_mask(UsageSeries(40, 7.5), policy);
  CHECK(out.value == 7.5);
  const int budget = policy.burst_budget();
  for (int t = 0; t < 40; ++t) CHECK(out.mask[t] == (t < budget ? 0 : 1));
}

TEST_CASE("mask and sort forms agree exactly on random series") {
  detail::SplitMix64 rng(20240901);
  const double qs[] = {0.9, 0.95, 0.99, 1.0};
  for (int i = 0; i < 1000; ++i) {
    const int tau = 1 + static_cast<int>(rng.below(500));
    BillingPolicy policy = policy_for(tau, qs[rng.below(4)]);
    UsageSeries series(tau);
    for (auto& v : series) v = rng.uniform(0.0, 1000.0);
    const auto masked = percentile_usage_via_mask(series, policy);
    CHECK(masked.value == percentile_usage(series, policy));
    int kept = 0;
    for (auto m : masked.mask) kept += m;
    CHECK(kept == policy.kept_count());
  }
}

TEST_CASE("percentile is monotone and scales linearly") {
  detail::SplitMix64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const int tau = 2 + static_cast<int>(rng.below(60));
    const BillingPolicy policy = policy_for(tau, 0.9);
    UsageSeries series(tau);
    for (auto& v : series) v = rng.uniform(0.0, 50.0);
    const double base = percentile_usage(series, policy);
    CHECK(base <= *std::max_element(series.begin(), series.end()));
    CHECK(base >= *std::min_element(series.begin(), series.end()));

    UsageSeries bumped = series;
    const size_t at = rng.below(tau);
    bumped[at] += rng.uniform(0.0, 25.0);
    CHECK(percentile_usage(bumped, policy) >= base);

    const double c = rng.uniform(0.0, 3.0);
    UsageSeries scaled = series;
    for (auto& v : scaled) v *= c;
    CHECK(percentile_usage(scaled, policy) ==
          doctest::Approx(c * base).epsilon(1e-12));
  }
}

TEST_CASE("q=1 gives the plain maximum") {
  detail::SplitMix64 rng(7);
  const int tau = 33;
  const BillingPolicy policy = policy_for(tau, 1.0);
  UsageSeries series(tau);
  for (auto& v : series) v = rng.uniform(0.0, 10.0);
  CHECK(percentile_usage(series, policy) ==
        *std::max_element(series.begin(), series.end()));
}

TEST_CASE("billing cost is price times percentile") {
  const BillingPolicy zero = policy_for(40, 0.95, 0.0);
  CHECK(billing_cost(UsageSeries(40, 123.0), zero) == 0.0);

  BillingPolicy two = policy_for(40, 0.95, 2.0);
  CHECK(billing_cost(UsageSeries(40, 100.0), two) == 200.0);

  // mu95 from a reference cycle at $15/Mbps.
  CHECK(15.0 * 399.1277 == doctest::Approx(5986.9155).epsilon(1e-12));
}
