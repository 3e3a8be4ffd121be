#pragma once

#include <span>
#include <vector>

namespace burstopt {

/// One discrete demand realization: `demand_mbps` occurs with `prob`.
struct ProbMass {
  double demand_mbps = 0.0;
  double prob = 1.0;
};

/// Isoelastic utility family over transferred volume v (megabits):
///   U(v) = A * v^(1-a) / (1-a)   for a in (0, 1)
///   U(v) = A * ln(max(v, eval_floor))   for a = 1
/// Solvers always pass volumes T*x (slot seconds times Mbps), never raw
/// rates, so the utility factor A is calibrated against megabits.
struct UtilitySpec {
  double factor_A = 0.08;    ///< utility factor A > 0
  double curvature_a = 0.1;  ///< concavity a in (0, 1]
  double eval_floor = 1e-6;  ///< log clamp, used only when a == 1

  void validate() const;
};

/// U(volume). U(0) == 0 for a < 1; negative volume is a domain error.
double utility_value(const UtilitySpec& spec, double volume_mb);

/// U'(volume) = A * volume^(-a). Strictly positive and strictly decreasing;
/// volume <= 0 is a domain error (the derivative is unbounded at 0).
double utility_derivative(const UtilitySpec& spec, double volume_mb);

/// Expected utility of one slot under a discrete demand distribution:
///   G(x) = sum_k prob_k * U(T * min(x, demand_k)).
/// Nondecreasing and concave in x, constant once x covers every realization.
/// Probabilities must sum to 1 within 1e-9.
double expected_slot_utility(const UtilitySpec& spec,
                             std::span<const ProbMass> slot_dist,
                             double slot_seconds, double usage_mbps);

/// A tangent to the utility curve in volume space: value_at(v) = slope*v + intercept.
struct TangentLine {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Piecewise-linear over-approximation of U by tangents at evenly spaced
/// anchor volumes. The pointwise minimum of the lines stays on or above the
/// curve everywhere and touches it at each anchor.
struct TangentSet {
  std::vector<TangentLine> lines;
  double anchor_spacing = 0.0;  ///< volume gap between consecutive anchors
  int count = 0;                ///< number of tangent lines

  /// min over lines of slope*volume + intercept.
  double value_at(double volume_mb) const;
};

/// N tangents anchored at n * (T*demand/N), n = 1..N. Anchors start at n=1
/// because U' is unbounded at zero; concavity keeps the first line above the
/// curve on [0, anchor). A zero demand yields the single degenerate line h <= 0.
TangentSet tangent_envelope(const UtilitySpec& spec, double demand_mbps,
                            double slot_seconds, int count);

}  // namespace burstopt
