#include "burstopt/plan.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace burstopt {

void Plan::validate(const BillingPolicy& policy) const {
  policy.validate();
  const size_t tau = static_cast<size_t>(policy.tau);
  if (planned_usage.size() != tau || burst_mask.size() != tau)
    throw std::invalid_argument("plan: length mismatch with policy tau");
  int kept = 0;
  double capped_max = 0.0;
  for (size_t t = 0; t < tau; ++t) {
    if (planned_usage[t] < 0.0)
      throw std::invalid_argument("plan: negative planned usage");
    if (burst_mask[t]) {
      ++kept;
      capped_max = std::max(capped_max, planned_usage[t]);
      if (planned_usage[t] > cap_phi + 1e-9 * (1.0 + cap_phi))
        throw std::invalid_argument("plan: counted usage exceeds cap_phi");
    }
  }
  if (kept != policy.kept_count())
    throw std::invalid_argument("plan: mask keeps " + std::to_string(kept) +
                                " slots, expected " +
                                std::to_string(policy.kept_count()));
  if (std::abs(capped_max - cap_phi) > 1e-9 * (1.0 + std::abs(cap_phi)))
    throw std::invalid_argument("plan: cap_phi is not the largest counted usage");
}

nlohmann::json plan_to_json(const Plan& plan) {
  nlohmann::json mask = nlohmann::json::array();
  for (auto m : plan.burst_mask) mask.push_back(static_cast<int>(m));
  return {{"tau", plan.planned_usage.size()},
          {"planned_usage_mbps", plan.planned_usage},
          {"burst_mask", std::move(mask)},
          {"cap_phi_mbps", plan.cap_phi},
          {"expected_cost", plan.expected_cost},
          {"expected_surplus", plan.expected_surplus},
          {"solver", plan.solver_tag}};
}

Plan plan_from_json(const nlohmann::json& j) {
  Plan plan;
  plan.planned_usage = j.at("planned_usage_mbps").get<std::vector<double>>();
  for (const auto& m : j.at("burst_mask"))
    plan.burst_mask.push_back(static_cast<std::uint8_t>(m.get<int>() ? 1 : 0));
  plan.cap_phi = j.at("cap_phi_mbps").get<double>();
  plan.expected_cost = j.at("expected_cost").get<double>();
  plan.expected_surplus = j.at("expected_surplus").get<double>();
  plan.solver_tag = j.at("solver").get<std::string>();
  if (j.at("tau").get<size_t>() != plan.planned_usage.size() ||
      plan.burst_mask.size() != plan.planned_usage.size())
    throw std::invalid_argument("plan: inconsistent lengths in JSON");
  return plan;
}

}  // namespace burstopt
