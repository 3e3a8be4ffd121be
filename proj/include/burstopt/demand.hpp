#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "burstopt/utility.hpp"

namespace burstopt {

/// Raw workload samples, one per slot, before conversion to Mbps.
struct Trace {
  std::vector<std::int64_t> timestamps;  ///< seconds since epoch, strictly increasing
  std::vector<double> values;            ///< nonnegative raw units (e.g. page views)
  double unit_scale = 1.0;               ///< raw units -> Mbps

  void validate() const;
};

/// CSV ingestion knobs. The file contract is one header line `timestamp,value`
/// followed by one row per slot: ISO-8601 UTC instant, nonnegative decimal.
struct TraceFormat {
  double unit_scale = 1.0;
};

/// Per-slot discrete demand distribution; a deterministic forecast is the
/// single-realization special case.
struct DemandScenario {
  std::vector<std::vector<ProbMass>> slots;

  int tau() const { return static_cast<int>(slots.size()); }

  /// Per-slot probability masses must each sum to 1 within 1e-9, demands
  /// nonnegative, at least one realization per slot.
  void validate() const;

  bool is_deterministic() const;  ///< every slot has exactly one realization

  static DemandScenario deterministic(const std::vector<double>& demand);

  std::vector<double> mean_demand() const;  ///< probability-weighted mean per slot
  std::vector<double> max_demand() const;   ///< largest realization per slot
};

/// Demand actually revealed during the cycle, one value per slot (Mbps).
using ExposedDemand = std::vector<double>;

Trace load_trace(const std::string& path, const TraceFormat& format = {});
Trace parse_trace_csv(std::istream& in, const TraceFormat& format,
                      const std::string& source_name);
void write_trace_csv(const Trace& trace, std::ostream& out);

/// Consecutive non-overlapping windows of tau slots, scaled to Mbps by
/// unit_scale; a trailing partial window is dropped.
std::vector<std::vector<double>> slice_cycles(const Trace& trace, int tau);

/// Two-cycle forecasters: the deterministic rule averages the matching slots
/// of the last two cycles; the stochastic rule keeps both as equally likely
/// realizations.
DemandScenario forecast_deterministic(const std::vector<double>& cycle_prev1,
                                      const std::vector<double>& cycle_prev2);
DemandScenario forecast_stochastic(const std::vector<double>& cycle_prev1,
                                   const std::vector<double>& cycle_prev2);

/// Seeded synthetic workload: a diurnal sine carrier with multiplicative
/// uniform noise and occasional multiplicative bursts.
struct SynthProfile {
  int num_slots = 672;
  double base_mbps = 10.0;
  double diurnal_amplitude = 0.5;  ///< relative swing of the daily curve, in [0, 1)
  int period_slots = 24;
  double noise_level = 0.1;        ///< relative uniform noise, in [0, 1)
  double burst_probability = 0.0;  ///< chance a slot bursts, in [0, 1]
  double burst_height = 5.0;       ///< multiplier applied on bursting slots
  std::int64_t start_timestamp = 1388534400;  ///< 2014-01-01T00:00:00Z
  std::int64_t slot_seconds = 3600;

  void validate() const;
};

/// Same seed, same trace.
Trace synth_trace(const SynthProfile& profile, std::uint64_t seed);

nlohmann::json scenario_to_json(const DemandScenario& scenario);
DemandScenario scenario_from_json(const nlohmann::json& j);
DemandScenario load_scenario(const std::string& path);
void save_scenario(const DemandScenario& scenario, const std::string& path);

/// ISO-8601 UTC helpers for the trace CSV format ("YYYY-MM-DDTHH:MM:SSZ").
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

}  // namespace burstopt
