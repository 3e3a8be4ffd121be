#pragma once

#include <span>
#include <vector>

#include "burstopt/billing.hpp"
#include "burstopt/utility.hpp"

namespace burstopt::detail {

/// Expected utility of one slot as a function of the slot's own usage x when
/// `shift` Mbps of the slot's demand is already served elsewhere:
///   G(x) = sum_k prob_k * U(T * min(shift + x, demand_k)).
/// Kept in sorted piecewise form so an evaluation costs one binary search and
/// at most one utility call.
struct SlotCurve {
  double shift = 0.0;
  std::vector<double> demands;    ///< realizations above shift, ascending, absolute Mbps
  std::vector<double> head_util;  ///< utility mass settled below demands[j]
  std::vector<double> tail_prob;  ///< probability mass at demands[j] and above
  double x_sat = 0.0;             ///< own usage beyond this is wasted
  double full_util = 0.0;         ///< G at saturation

  double eval(const UtilitySpec& spec, double slot_seconds, double x) const;

  /// Index of the first stored demand strictly above absolute level y.
  std::size_t piece(double y) const;
};

SlotCurve make_slot_curve(std::span<const ProbMass> dist, const UtilitySpec& spec,
                          double slot_seconds, double shift);

std::vector<SlotCurve> scenario_curves(
    const std::vector<std::vector<ProbMass>>& slots, const UtilitySpec& spec,
    double slot_seconds, const std::vector<double>* shifts = nullptr);

struct SweepResult {
  std::vector<double> usage;
  BurstMask mask;          ///< 0 on exempted slots
  double cap = 0.0;        ///< cap applied to counted slots
  double objective = 0.0;  ///< sum_t G_t(x_t) - delta * cap
};

/// Maximizes sum_t G_t(x_t) - delta * cap over a common cap on counted slots
/// with exactly `free_count` slots exempt: every candidate cap (zero plus all
/// per-slot saturation breakpoints) is scored with its best exempt set, then
/// each inter-candidate segment is refined by golden-section with the segment
/// endpoints' exempt sets frozen. Deterministic: objective ties prefer the
/// smaller cap, then the lexicographically smaller mask.
SweepResult sweep_caps(const std::vector<SlotCurve>& slots,
                       const UtilitySpec& spec, double slot_seconds,
                       double delta, int free_count, double tol_rel = 1e-9);

struct FixedMaskResult {
  double cap = 0.0;
  double objective = 0.0;
};

/// Same objective with the exempt set fixed; one concave maximization over
/// the cap (candidate breakpoints plus golden-section).
FixedMaskResult maximize_fixed_mask(const std::vector<SlotCurve>& slots,
                                    const BurstMask& mask,
                                    const UtilitySpec& spec, double slot_seconds,
                                    double delta, double tol_rel = 1e-9);

/// Usage vector induced by (mask, cap): saturation on exempt slots,
/// min(saturation, cap) on counted ones.
std::vector<double> usage_for(const std::vector<SlotCurve>& slots,
                              const BurstMask& mask, double cap);

}  // namespace burstopt::detail
