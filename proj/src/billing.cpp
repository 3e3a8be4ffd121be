#include "burstopt/billing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace burstopt {

void BillingPolicy::validate() const {
  if (tau < 1) throw std::invalid_argument("billing: tau must be >= 1");
  if (!(slot_seconds > 0.0))
    throw std::invalid_argument("billing: slot_seconds must be positive");
  if (!(percentile_q > 0.0) || percentile_q > 1.0)
    throw std::invalid_argument("billing: percentile_q must be in (0, 1]");
  if (price_delta < 0.0)
    throw std::invalid_argument("billing: price_delta must be nonnegative");
}

int BillingPolicy::kept_count() const {
  // Guard against q*tau landing a hair above an integer in floating point
  // (e.g. 0.95 * 20 evaluates to 19 + 4ulp).
  const double scaled = percentile_q * static_cast<double>(tau);
  const int kept = static_cast<int>(std::ceil(scaled - 1e-9));
  return std::clamp(kept, 1, tau);
}

int BillingPolicy::burst_budget() const { return tau - kept_count(); }

int burst_budget(const BillingPolicy& policy) {
  policy.validate();
  return policy.burst_budget();
}

namespace {

void check_shape(const UsageSeries& series, const BillingPolicy& policy) {
  policy.validate();
  if (static_cast<int>(series.size()) != policy.tau)
    throw std::invalid_argument("billing: series length " +
                                std::to_string(series.size()) +
                                " does not match tau " +
                                std::to_string(policy.tau));
}

}  // namespace

BurstMask top_value_mask(const std::vector<double>& values, int zero_count) {
  const int n = static_cast<int>(values.size());
  zero_count = std::clamp(zero_count, 0, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Largest values first; equal values keep their index order so the earliest
  // slots are discarded first.
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  BurstMask mask(n, 1);
  for (int i = 0; i < zero_count; ++i) mask[order[i]] = 0;
  return mask;
}

double percentile_usage(const UsageSeries& series, const BillingPolicy& policy) {
  check_shape(series, policy);
  const int budget = policy.burst_budget();
  if (budget == 0) return *std::max_element(series.begin(), series.end());
  std::vector<double> work(series);
  std::nth_element(work.begin(), work.begin() + budget, work.end(),
                   std::greater<double>());
  return work[budget];
}

MaskedPercentile percentile_usage_via_mask(const UsageSeries& series,
                                           const BillingPolicy& policy) {
  check_shape(series, policy);
  MaskedPercentile out;
  out.mask = top_value_mask(series, policy.burst_budget());
  double best = 0.0;
  bool any = false;
  for (size_t t = 0; t < series.size(); ++t) {
    if (!out.mask[t]) continue;
    if (!any || series[t] > best) best = series[t];
    any = true;
  }
  out.value = best;
  return out;
}

double billing_cost(const UsageSeries& series, const BillingPolicy& policy) {
  return policy.price_delta * percentile_usage(series, policy);
}

}  // namespace burstopt
