#pragma once

#include <cmath>
#include <utility>

namespace burstopt::detail {

struct GoldenResult {
  double arg = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of a unimodal (here: concave) function on
/// [lo, hi]. Stops once the bracket shrinks below tol_abs.
template <class F>
GoldenResult golden_section_max(F&& f, double lo, double hi, double tol_abs) {
  if (hi <= lo) return {lo, f(lo)};
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 400 && (b - a) > tol_abs; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, f(mid)};
}

}  // namespace burstopt::detail
