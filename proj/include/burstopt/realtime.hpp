#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/multi_provider.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/utility.hpp"

namespace burstopt {

/// Intra-cycle usage update against the exposed demand: exempt slots serve
/// on demand; counted slots serve on demand up to the plan's percentile and
/// are rate-limited at it beyond. The percentile is recomputed from the
/// plan's usage vector, never read from cap_phi. Guarantees updated <= exposed
/// per slot and a percentile no higher than the plan's.
UsageSeries update_usage(const Plan& plan, const ExposedDemand& exposed,
                         const BillingPolicy& policy);

/// The same rule applied per provider with that provider's own mask and
/// percentile. Note slots exempt for several providers are served in full by
/// each of them; the aggregate can then exceed the exposed demand, which the
/// realized-surplus accounting takes at face value.
std::vector<UsageSeries> update_usage_multi(const MultiPlan& plan,
                                            const ExposedDemand& exposed,
                                            const ProviderSet& providers);

/// Realized surplus of updated usage: utility of the summed delivery minus
/// each provider's percentile bill.
double realized_surplus(const std::vector<UsageSeries>& updated,
                        const UtilitySpec& spec, const ProviderSet& providers);
double realized_surplus(const UsageSeries& updated, const UtilitySpec& spec,
                        const BillingPolicy& policy);
double realized_net_utility(const UsageSeries& updated, const UtilitySpec& spec,
                            double slot_seconds);

struct MethodResult {
  std::string method;
  double realized_cost = 0.0;
  double realized_surplus = 0.0;
  double normalized_surplus = 0.0;  ///< relative to the Ideal method
  double mu95 = 0.0;                ///< percentile of the updated usage
  UsageSeries updated_usage;        ///< summed over providers
};

struct CycleReport {
  std::vector<MethodResult> methods;
  double ideal_surplus = 0.0;  ///< normalization base
};

inline const std::vector<std::string> kSingleProviderMethods = {
    "Baseline", "Ideal", "Deterministic", "Stochastic"};
inline const std::vector<std::string> kMultiProviderMethods = {
    "Ideal-MSP",         "Baseline-SSP",   "Deterministic-SSP",
    "Stochastic-SSP",    "Deterministic-MSP", "Stochastic-MSP"};

/// One cycle, one provider: plans each requested method against the forecast
/// (Baseline skips planning, Ideal plans on the truth), updates against the
/// exposed truth, and reports realized figures normalized by Ideal.
CycleReport simulate_cycle(const ExposedDemand& truth,
                           const DemandScenario& forecast,
                           const UtilitySpec& spec, const BillingPolicy& policy,
                           const std::vector<std::string>& methods =
                               kSingleProviderMethods);

/// The six-way single/multi provider comparison, normalized by Ideal-MSP.
/// SSP methods use provider 1 alone.
CycleReport simulate_cycle_msp(const ExposedDemand& truth,
                               const DemandScenario& forecast,
                               const UtilitySpec& spec,
                               const ProviderSet& providers,
                               const std::vector<std::string>& methods =
                                   kMultiProviderMethods);

nlohmann::json cycle_report_to_json(const CycleReport& report);

}  // namespace burstopt
