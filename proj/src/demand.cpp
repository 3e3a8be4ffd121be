#include "burstopt/demand.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "burstopt/detail/prng.hpp"

namespace burstopt {

namespace {

constexpr double kProbTol = 1e-9;

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar
// (Howard Hinnant's civil-days algorithm).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

bool in_range(int v, int lo, int hi) { return v >= lo && v <= hi; }

}  // namespace

std::int64_t parse_iso8601_utc(const std::string& text) {
  int y, mo, d, h, mi, s;
  char tail = '\0';
  const int got =
      std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h,
                  &mi, &s, &tail);
  if (got != 7 || tail != 'Z' || !in_range(mo, 1, 12) || !in_range(d, 1, 31) ||
      !in_range(h, 0, 23) || !in_range(mi, 0, 59) || !in_range(s, 0, 60))
    throw std::invalid_argument("demand: bad ISO-8601 UTC timestamp '" + text + "'");
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y;
  unsigned mo, d;
  civil_from_days(days, y, mo, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo,
                d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

void Trace::validate() const {
  if (timestamps.size() != values.size())
    throw std::invalid_argument("demand: trace timestamp/value length mismatch");
  if (!(unit_scale > 0.0))
    throw std::invalid_argument("demand: unit_scale must be positive");
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0)
      throw std::invalid_argument("demand: negative value at row " +
                                  std::to_string(i + 2));
    if (i > 0 && timestamps[i] <= timestamps[i - 1])
      throw std::invalid_argument(
          "demand: timestamps must be strictly increasing at row " +
          std::to_string(i + 2));
  }
}

Trace parse_trace_csv(std::istream& in, const TraceFormat& format,
                      const std::string& source_name) {
  Trace trace;
  trace.unit_scale = format.unit_scale;
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("demand: " + source_name + ":" +
                                std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "timestamp,value") fail("expected header 'timestamp,value'");
      continue;
    }
    if (line.empty()) fail("empty row");
    const size_t comma = line.find(',');
    if (comma == std::string::npos || comma + 1 >= line.size())
      fail("row must be 'timestamp,value'");
    std::int64_t ts = 0;
    try {
      ts = parse_iso8601_utc(line.substr(0, comma));
    } catch (const std::invalid_argument&) {
      fail("unparsable timestamp");
    }
    const std::string value_text = line.substr(comma + 1);
    size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(value_text, &used);
    } catch (const std::exception&) {
      fail("unparsable value");
    }
    if (used != value_text.size()) fail("trailing junk after value");
    if (!std::isfinite(value) || value < 0.0) fail("value must be nonnegative");
    if (!trace.timestamps.empty() && ts <= trace.timestamps.back())
      fail("timestamps must be strictly increasing");
    trace.timestamps.push_back(ts);
    trace.values.push_back(value);
  }
  if (line_no == 0)
    throw std::invalid_argument("demand: " + source_name + ": empty file");
  return trace;
}

Trace load_trace(const std::string& path, const TraceFormat& format) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("demand: cannot open '" + path + "'");
  return parse_trace_csv(in, format, path);
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  trace.validate();
  out << "timestamp,value\n";
  char buf[64];
  for (size_t i = 0; i < trace.values.size(); ++i) {
    const int n =
        std::snprintf(buf, sizeof(buf), "%.10g", trace.values[i]);
    out << format_iso8601_utc(trace.timestamps[i]) << ',';
    out.write(buf, n);
    out << '\n';
  }
}

std::vector<std::vector<double>> slice_cycles(const Trace& trace, int tau) {
  trace.validate();
  if (tau < 1) throw std::invalid_argument("demand: tau must be >= 1");
  if (static_cast<int>(trace.values.size()) < tau)
    throw std::invalid_argument("demand: trace shorter than one cycle (" +
                                std::to_string(trace.values.size()) + " < " +
                                std::to_string(tau) + ")");
  const size_t cycles = trace.values.size() / static_cast<size_t>(tau);
  std::vector<std::vector<double>> out(cycles);
  for (size_t c = 0; c < cycles; ++c) {
    out[c].resize(tau);
    for (int t = 0; t < tau; ++t)
      out[c][t] = trace.values[c * tau + t] * trace.unit_scale;
  }
  return out;
}

void DemandScenario::validate() const {
  if (slots.empty()) throw std::invalid_argument("demand: empty scenario");
  for (size_t t = 0; t < slots.size(); ++t) {
    if (slots[t].empty())
      throw std::invalid_argument("demand: slot " + std::to_string(t) +
                                  " has no realizations");
    double total = 0.0;
    for (const auto& pm : slots[t]) {
      if (pm.demand_mbps < 0.0)
        throw std::invalid_argument("demand: negative demand in slot " +
                                    std::to_string(t));
      if (pm.prob < 0.0)
        throw std::invalid_argument("demand: negative probability in slot " +
                                    std::to_string(t));
      total += pm.prob;
    }
    if (std::abs(total - 1.0) > kProbTol)
      throw std::invalid_argument("demand: probabilities in slot " +
                                  std::to_string(t) + " sum to " +
                                  std::to_string(total) + ", expected 1");
  }
}

bool DemandScenario::is_deterministic() const {
  return std::all_of(slots.begin(), slots.end(),
                     [](const auto& s) { return s.size() == 1; });
}

DemandScenario DemandScenario::deterministic(const std::vector<double>& demand) {
  DemandScenario s;
  s.slots.reserve(demand.size());
  for (double d : demand) s.slots.push_back({{d, 1.0}});
  s.validate();
  return s;
}

std::vector<double> DemandScenario::mean_demand() const {
  std::vector<double> out(slots.size(), 0.0);
  for (size_t t = 0; t < slots.size(); ++t)
    for (const auto& pm : slots[t]) out[t] += pm.prob * pm.demand_mbps;
  return out;
}

std::vector<double> DemandScenario::max_demand() const {
  std::vector<double> out(slots.size(), 0.0);
  for (size_t t = 0; t < slots.size(); ++t)
    for (const auto& pm : slots[t]) out[t] = std::max(out[t], pm.demand_mbps);
  return out;
}

namespace {

void check_equal_cycles(const std::vector<double>& a,
                        const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("demand: forecaster needs equal-length cycles");
  if (a.empty()) throw std::invalid_argument("demand: empty cycles");
}

}  // namespace

DemandScenario forecast_deterministic(const std::vector<double>& cycle_prev1,
                                      const std::vector<double>& cycle_prev2) {
  check_equal_cycles(cycle_prev1, cycle_prev2);
  DemandScenario s;
  s.slots.reserve(cycle_prev1.size());
  for (size_t t = 0; t < cycle_prev1.size(); ++t)
    s.slots.push_back({{0.5 * cycle_prev1[t] + 0.5 * cycle_prev2[t], 1.0}});
  return s;
}

DemandScenario forecast_stochastic(const std::vector<double>& cycle_prev1,
                                   const std::vector<double>& cycle_prev2) {
  check_equal_cycles(cycle_prev1, cycle_prev2);
  DemandScenario s;
  s.slots.reserve(cycle_prev1.size());
  for (size_t t = 0; t < cycle_prev1.size(); ++t)
    s.slots.push_back({{cycle_prev1[t], 0.5}, {cycle_prev2[t], 0.5}});
  return s;
}

void SynthProfile::validate() const {
  if (num_slots < 1)
    throw std::invalid_argument("demand: synth num_slots must be >= 1");
  if (!(base_mbps > 0.0))
    throw std::invalid_argument("demand: synth base_mbps must be positive");
  if (diurnal_amplitude < 0.0 || diurnal_amplitude >= 1.0)
    throw std::invalid_argument("demand: synth diurnal_amplitude must be in [0, 1)");
  if (period_slots < 1)
    throw std::invalid_argument("demand: synth period_slots must be >= 1");
  if (noise_level < 0.0 || noise_level >= 1.0)
    throw std::invalid_argument("demand: synth noise_level must be in [0, 1)");
  if (burst_probability < 0.0 || burst_probability > 1.0)
    throw std::invalid_argument("demand: synth burst_probability must be in [0, 1]");
  if (!(burst_height > 0.0))
    throw std::invalid_argument("demand: synth burst_height must be positive");
  if (slot_seconds < 1)
    throw std::invalid_argument("demand: synth slot_seconds must be >= 1");
}

Trace synth_trace(const SynthProfile& profile, std::uint64_t seed) {
  profile.validate();
  detail::SplitMix64 rng(seed);
  Trace trace;
  trace.unit_scale = 1.0;
  trace.timestamps.reserve(profile.num_slots);
  trace.values.reserve(profile.num_slots);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int t = 0; t < profile.num_slots; ++t) {
    const double phase = two_pi * (t % profile.period_slots) / profile.period_slots;
    double v = profile.base_mbps *
               (1.0 + profile.diurnal_amplitude * std::sin(phase));
    v *= 1.0 + profile.noise_level * (2.0 * rng.uniform() - 1.0);
    if (rng.uniform() < profile.burst_probability) v *= profile.burst_height;
    trace.timestamps.push_back(profile.start_timestamp +
                               static_cast<std::int64_t>(t) * profile.slot_seconds);
    trace.values.push_back(std::max(v, 0.0));
  }
  return trace;
}

nlohmann::json scenario_to_json(const DemandScenario& scenario) {
  scenario.validate();
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& slot : scenario.slots) {
    nlohmann::json reals = nlohmann::json::array();
    for (const auto& pm : slot)
      reals.push_back({{"demand_mbps", pm.demand_mbps}, {"prob", pm.prob}});
    slots.push_back({{"realizations", std::move(reals)}});
  }
  return {{"tau", scenario.tau()}, {"slots", std::move(slots)}};
}

DemandScenario scenario_from_json(const nlohmann::json& j) {
  DemandScenario scenario;
  if (!j.is_object() || !j.contains("tau") || !j.contains("slots"))
    throw std::invalid_argument("demand: scenario JSON needs 'tau' and 'slots'");
  for (const auto& slot : j.at("slots")) {
    std::vector<ProbMass> dist;
    for (const auto& r : slot.at("realizations"))
      dist.push_back({r.at("demand_mbps").get<double>(), r.at("prob").get<double>()});
    scenario.slots.push_back(std::move(dist));
  }
  if (j.at("tau").get<int>() != scenario.tau())
    throw std::invalid_argument("demand: scenario 'tau' does not match slot count");
  scenario.validate();
  return scenario;
}

DemandScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("demand: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("demand: bad scenario JSON in '" + path +
                                "': " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const DemandScenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("demand: cannot write '" + path + "'");
  out << scenario_to_json(scenario).dump(2) << '\n';
}

}  // namespace burstopt
