#include "burstopt/detail/sweep_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "burstopt/detail/numeric.hpp"

namespace burstopt::detail {

namespace {

bool mask_less(const BurstMask& a, const BurstMask& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

double SlotCurve::eval(const UtilitySpec& spec, double slot_seconds,
                       double x) const {
  if (demands.empty()) return full_util;
  const double y = shift + std::clamp(x, 0.0, x_sat);
  const std::size_t j = piece(y);
  if (j == demands.size()) return full_util;
  return head_util[j] + tail_prob[j] * utility_value(spec, slot_seconds * y);
}

std::size_t SlotCurve::piece(double y) const {
  return static_cast<std::size_t>(
      std::upper_bound(demands.begin(), demands.end(), y) - demands.begin());
}

SlotCurve make_slot_curve(std::span<const ProbMass> dist,
                          const UtilitySpec& spec, double slot_seconds,
                          double shift) {
  SlotCurve curve;
  curve.shift = shift;
  std::vector<ProbMass> sorted(dist.begin(), dist.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ProbMass& a, const ProbMass& b) {
              return a.demand_mbps < b.demand_mbps;
            });
  double settled = 0.0;
  for (const auto& pm : sorted) {
    const double u = utility_value(spec, slot_seconds * pm.demand_mbps);
    curve.full_util += pm.prob * u;
    if (pm.demand_mbps <= shift) {
      settled += pm.prob * u;
    } else {
      curve.demands.push_back(pm.demand_mbps);
    }
  }
  curve.head_util.resize(curve.demands.size());
  curve.tail_prob.resize(curve.demands.size());
  // Second pass over the active realizations for the running sums.
  double head = settled;
  std::size_t j = 0;
  double tail = 0.0;
  for (const auto& pm : sorted)
    if (pm.demand_mbps > shift) tail += pm.prob;
  for (const auto& pm : sorted) {
    if (pm.demand_mbps <= shift) continue;
    curve.head_util[j] = head;
    curve.tail_prob[j] = tail;
    head += pm.prob * utility_value(spec, slot_seconds * pm.demand_mbps);
    tail -= pm.prob;
    ++j;
  }
  curve.x_sat = curve.demands.empty() ? 0.0 : curve.demands.back() - shift;
  return curve;
}

std::vector<SlotCurve> scenario_curves(
    const std::vector<std::vector<ProbMass>>& slots, const UtilitySpec& spec,
    double slot_seconds, const std::vector<double>* shifts) {
  if (shifts && shifts->size() != slots.size())
    throw std::invalid_argument("sweep: shift vector length mismatch");
  std::vector<SlotCurve> curves;
  curves.reserve(slots.size());
  for (std::size_t t = 0; t < slots.size(); ++t)
    curves.push_back(make_slot_curve(slots[t], spec, slot_seconds,
                                     shifts ? (*shifts)[t] : 0.0));
  return curves;
}

std::vector<double> usage_for(const std::vector<SlotCurve>& slots,
                              const BurstMask& mask, double cap) {
  std::vector<double> usage(slots.size());
  for (std::size_t t = 0; t < slots.size(); ++t)
    usage[t] = mask[t] ? std::min(slots[t].x_sat, cap) : slots[t].x_sat;
  return usage;
}

namespace {

struct Best {
  double objective = -std::numeric_limits<double>::infinity();
  double cap = 0.0;
  BurstMask mask;

  void consider(double objective_in, double cap_in, const BurstMask& mask_in) {
    if (objective_in > objective) {
      objective = objective_in;
      cap = cap_in;
      mask = mask_in;
      return;
    }
    if (objective_in == objective) {
      if (cap_in < cap || (cap_in == cap && mask_less(mask_in, mask))) {
        cap = cap_in;
        mask = mask_in;
      }
    }
  }
};

// Frozen-mask restriction of the sweep objective on one inter-candidate
// segment: no slot changes piece inside the open segment, so the capped part
// collapses to a constant plus tail-probability-weighted utility terms.
struct SegmentObjective {
  double constant = 0.0;  // exempt slots plus slots saturated on the segment
  std::vector<double> tails;   // per active slot
  std::vector<double> shifts;  // matching shifts
  bool uniform = true;         // all active shifts equal (fast path)
  double shift0 = 0.0;
  double tail_sum = 0.0;
  double delta = 0.0;
  const UtilitySpec* spec = nullptr;
  double slot_seconds = 0.0;

  double operator()(double cap) const {
    double value = constant - delta * cap;
    if (tails.empty()) return value;
    if (uniform)
      return value +
             tail_sum * utility_value(*spec, slot_seconds * (shift0 + cap));
    for (std::size_t i = 0; i < tails.size(); ++i)
      value += tails[i] * utility_value(*spec, slot_seconds * (shifts[i] + cap));
    return value;
  }
};

SegmentObjective segment_objective(const std::vector<SlotCurve>& slots,
                                   const BurstMask& mask,
                                   const UtilitySpec& spec, double slot_seconds,
                                   double delta, double probe) {
  SegmentObjective seg;
  seg.delta = delta;
  seg.spec = &spec;
  seg.slot_seconds = slot_seconds;
  for (std::size_t t = 0; t < slots.size(); ++t) {
    const SlotCurve& s = slots[t];
    if (!mask[t] || probe >= s.x_sat) {
      seg.constant += s.full_util;
      continue;
    }
    const std::size_t j = s.piece(s.shift + probe);
    if (j == s.demands.size()) {
      seg.constant += s.full_util;
      continue;
    }
    seg.constant += s.head_util[j];
    seg.tails.push_back(s.tail_prob[j]);
    seg.shifts.push_back(s.shift);
    if (seg.shifts.size() == 1)
      seg.shift0 = s.shift;
    else if (s.shift != seg.shift0)
      seg.uniform = false;
    seg.tail_sum += s.tail_prob[j];
  }
  return seg;
}

}  // namespace

FixedMaskResult maximize_fixed_mask(const std::vector<SlotCurve>& slots,
                                    const BurstMask& mask,
                                    const UtilitySpec& spec, double slot_seconds,
                                    double delta, double tol_rel) {
  double free_const = 0.0;
  double hi = 0.0;
  std::vector<double> cands{0.0};
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (!mask[t]) {
      free_const += slots[t].full_util;
      continue;
    }
    hi = std::max(hi, slots[t].x_sat);
    for (double d : slots[t].demands)
      if (d - slots[t].shift > 0.0) cands.push_back(d - slots[t].shift);
  }
  auto objective = [&](double cap) {
    double value = free_const - delta * cap;
    for (std::size_t t = 0; t < slots.size(); ++t)
      if (mask[t]) value += slots[t].eval(spec, slot_seconds, cap);
    return value;
  };
  FixedMaskResult best{0.0, objective(0.0)};
  auto consider = [&](double cap, double value) {
    if (value > best.objective ||
        (value == best.objective && cap < best.cap)) {
      best.objective = value;
      best.cap = cap;
    }
  };
  std::sort(cands.begin(), cands.end());
  for (double c : cands)
    if (c <= hi) consider(c, objective(c));
  if (hi > 0.0) {
    const auto refined =
        golden_section_max(objective, 0.0, hi, tol_rel * (1.0 + hi));
    consider(refined.arg, refined.value);
  }
  return best;
}

SweepResult sweep_caps(const std::vector<SlotCurve>& slots,
                       const UtilitySpec& spec, double slot_seconds,
                       double delta, int free_count, double tol_rel) {
  const std::size_t tau = slots.size();
  if (tau == 0) throw std::invalid_argument("sweep: no slots");
  free_count = std::clamp(free_count, 0, static_cast<int>(tau));

  // Candidate caps: zero plus every positive per-slot breakpoint.
  std::vector<double> cands{0.0};
  for (const auto& s : slots)
    for (double d : s.demands)
      if (d - s.shift > 0.0) cands.push_back(d - s.shift);
  std::sort(cands.begin(), cands.end());
  std::vector<double> unique_cands;
  for (double c : cands)
    if (unique_cands.empty() ||
        c - unique_cands.back() > 1e-12 * std::max(1.0, c))
      unique_cands.push_back(c);

  const bool uniform_shift =
      std::all_of(slots.begin(), slots.end(),
                  [&](const SlotCurve& s) { return s.shift == slots[0].shift; });

  std::vector<double> gains(tau);
  // Scores one candidate cap with its best exempt set.
  auto eval_candidate = [&](double cap) {
    double base = -delta * cap;
    if (uniform_shift) {
      // One utility call shared by every unsaturated slot.
      double u = 0.0;
      bool have_u = false;
      for (std::size_t t = 0; t < tau; ++t) {
        const SlotCurve& s = slots[t];
        if (cap >= s.x_sat || s.demands.empty()) {
          base += s.full_util;
          gains[t] = 0.0;
          continue;
        }
        if (!have_u) {
          u = utility_value(spec, slot_seconds * (s.shift + cap));
          have_u = true;
        }
        const std::size_t j = s.piece(s.shift + cap);
        if (j == s.demands.size()) {
          base += s.full_util;
          gains[t] = 0.0;
          continue;
        }
        const double g = s.head_util[j] + s.tail_prob[j] * u;
        base += g;
        gains[t] = s.full_util - g;
      }
    } else {
      for (std::size_t t = 0; t < tau; ++t) {
        const double g = slots[t].eval(spec, slot_seconds, cap);
        base += g;
        gains[t] = slots[t].full_util - g;
      }
    }
    BurstMask mask = top_value_mask(gains, free_count);
    double freed = 0.0;
    for (std::size_t t = 0; t < tau; ++t)
      if (!mask[t]) freed += gains[t];
    return std::pair<double, BurstMask>(base + freed, std::move(mask));
  };

  Best best;
  std::vector<BurstMask> cand_masks(unique_cands.size());
  for (std::size_t i = 0; i < unique_cands.size(); ++i) {
    auto [objective, mask] = eval_candidate(unique_cands[i]);
    best.consider(objective, unique_cands[i], mask);
    cand_masks[i] = std::move(mask);
  }

  const double range = unique_cands.back();
  const double tol_abs = tol_rel * (1.0 + range);
  for (std::size_t i = 0; i + 1 < unique_cands.size(); ++i) {
    const double lo = unique_cands[i];
    const double hi = unique_cands[i + 1];
    if (hi - lo <= tol_abs) continue;
    const double probe = 0.5 * (lo + hi);
    const BurstMask* endpoint_masks[2] = {&cand_masks[i], &cand_masks[i + 1]};
    for (int e = 0; e < 2; ++e) {
      if (e == 1 && *endpoint_masks[1] == *endpoint_masks[0]) break;
      const BurstMask& mask = *endpoint_masks[e];
      const SegmentObjective seg =
          segment_objective(slots, mask, spec, slot_seconds, delta, probe);
      const auto refined = golden_section_max(seg, lo, hi, tol_abs);
      best.consider(refined.value, refined.arg, mask);
    }
  }

  SweepResult result;
  result.cap = best.cap;
  result.mask = std::move(best.mask);
  result.objective = best.objective;
  result.usage = usage_for(slots, result.mask, result.cap);
  return result;
}

}  // namespace burstopt::detail
