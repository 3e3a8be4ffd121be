#pragma once

#include <cstdint>
#include <vector>

namespace burstopt {

/// One burstable-billing contract: cycle geometry plus the bandwidth price.
/// A cycle is `tau` slots of `slot_seconds` each; the bill is `price_delta`
/// dollars per Mbps of the `percentile_q` usage over the cycle.
struct BillingPolicy {
  int tau = 672;               ///< slots per billing cycle
  double slot_seconds = 3600;  ///< slot length T in seconds
  double percentile_q = 0.95;  ///< billed percentile, in (0, 1]
  double price_delta = 15.0;   ///< $/Mbps applied to the percentile usage

  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;

  /// Number of samples kept when computing the percentile: ceil(q * tau).
  int kept_count() const;

  /// Samples discarded before taking the max: tau - kept_count(). A user may
  /// burst this many slots per cycle without affecting its bill.
  int burst_budget() const;
};

/// Per-slot bandwidth usage over one cycle, Mbps, length tau.
using UsageSeries = std::vector<double>;

/// Per-slot selection mask: 0 on slots excluded from the percentile.
using BurstMask = std::vector<std::uint8_t>;

int burst_budget(const BillingPolicy& policy);

/// The ceil(q*tau)-th largest sample: discard the top burst_budget() samples
/// and return the max of the rest. This is the canonical percentile value the
/// rest of the toolkit builds on.
double percentile_usage(const UsageSeries& series, const BillingPolicy& policy);

struct MaskedPercentile {
  double value = 0.0;
  BurstMask mask;  ///< 0 exactly on the discarded slots, sum == kept_count
};

/// Selection-mask form of the percentile: the mask zeroes the burst_budget()
/// largest samples (earliest index first on ties) and the value is
/// max_t mask[t]*series[t]. Equals percentile_usage() exactly.
MaskedPercentile percentile_usage_via_mask(const UsageSeries& series,
                                           const BillingPolicy& policy);

/// price_delta times the percentile usage.
double billing_cost(const UsageSeries& series, const BillingPolicy& policy);

/// Mask with `zero_count` zeros placed on the largest values, breaking ties
/// toward the earliest index. Shared by the billing and planning modules so
/// their slot selections agree sample-for-sample.
BurstMask top_value_mask(const std::vector<double>& values, int zero_count);

}  // namespace burstopt
