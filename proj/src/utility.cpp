#include "burstopt/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace burstopt {

namespace {
constexpr double kProbTol = 1e-9;
}

void UtilitySpec::validate() const {
  if (!(factor_A > 0.0))
    throw std::invalid_argument("utility: factor_A must be positive");
  if (!(curvature_a > 0.0) || curvature_a > 1.0)
    throw std::invalid_argument("utility: curvature_a must be in (0, 1]");
  if (!(eval_floor > 0.0))
    throw std::invalid_argument("utility: eval_floor must be positive");
}

double utility_value(const UtilitySpec& spec, double volume_mb) {
  spec.validate();
  if (volume_mb < 0.0)
    throw std::domain_error("utility: volume must be nonnegative");
  if (spec.curvature_a == 1.0)
    return spec.factor_A * std::log(std::max(volume_mb, spec.eval_floor));
  const double p = 1.0 - spec.curvature_a;
  return spec.factor_A * std::pow(volume_mb, p) / p;
}

double utility_derivative(const UtilitySpec& spec, double volume_mb) {
  spec.validate();
  if (!(volume_mb > 0.0))
    throw std::domain_error("utility: derivative needs a positive volume");
  return spec.factor_A * std::pow(volume_mb, -spec.curvature_a);
}

double expected_slot_utility(const UtilitySpec& spec,
                             std::span<const ProbMass> slot_dist,
                             double slot_seconds, double usage_mbps) {
  spec.validate();
  if (slot_dist.empty())
    throw std::invalid_argument("utility: empty slot distribution");
  if (usage_mbps < 0.0)
    throw std::domain_error("utility: usage must be nonnegative");
  double total_prob = 0.0;
  for (const auto& pm : slot_dist) {
    if (pm.demand_mbps < 0.0 || pm.prob < 0.0)
      throw std::invalid_argument("utility: negative demand or probability");
    total_prob += pm.prob;
  }
  if (std::abs(total_prob - 1.0) > kProbTol)
    throw std::invalid_argument("utility: slot probabilities must sum to 1");
  double out = 0.0;
  for (const auto& pm : slot_dist)
    out += pm.prob *
           utility_value(spec, slot_seconds * std::min(usage_mbps, pm.demand_mbps));
  return out;
}

double TangentSet::value_at(double volume_mb) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& line : lines)
    best = std::min(best, line.slope * volume_mb + line.intercept);
  return best;
}

TangentSet tangent_envelope(const UtilitySpec& spec, double demand_mbps,
                            double slot_seconds, int count) {
  spec.validate();
  if (count < 1) throw std::invalid_argument("utility: tangent count must be >= 1");
  if (demand_mbps < 0.0)
    throw std::domain_error("utility: demand must be nonnegative");
  TangentSet set;
  if (demand_mbps == 0.0) {
    // Degenerate slot: the approximated value is pinned at h <= 0.
    set.lines.push_back({0.0, 0.0});
    set.anchor_spacing = 0.0;
    set.count = 1;
    return set;
  }
  const double spacing = slot_seconds * demand_mbps / count;
  set.anchor_spacing = spacing;
  set.count = count;
  set.lines.reserve(count);
  for (int n = 1; n <= count; ++n) {
    const double anchor = n * spacing;
    const double slope = utility_derivative(spec, anchor);
    const double intercept = utility_value(spec, anchor) - slope * anchor;
    set.lines.push_back({slope, intercept});
  }
  return set;
}

}  // namespace burstopt
