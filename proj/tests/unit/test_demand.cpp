#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "burstopt/demand.hpp"

using namespace burstopt;

TEST_CASE("iso8601 round trip") {
  CHECK(parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601_utc("2014-01-01T00:00:00Z") == 1388534400);
  CHECK(format_iso8601_utc(1388534400) == "2014-01-01T00:00:00Z");
  CHECK(format_iso8601_utc(parse_iso8601_utc("2015-05-31T23:59:59Z")) ==
        "2015-05-31T23:59:59Z");
  CHECK_THROWS_AS(parse_iso8601_utc("2014-01-01 00:00:00"),
                  std::invalid_argument);
}

TEST_CASE("trace csv parsing") {
  SUBCASE("well formed") {
    std::istringstream in(
        "timestamp,value\n"
        "2014-01-01T00:00:00Z,10\n"
        "2014-01-01T01:00:00Z,11.5\n"
        "2014-01-01T02:00:00Z,0\n");
    const Trace trace = parse_trace_csv(in, {}, "test");
    REQUIRE(trace.values.size() == 3);
    CHECK(trace.values[1] == 11.5);
  }
  SUBCASE("negative value names the row") {
    std::istringstream in(
        "timestamp,value\n"
        "2014-01-01T00:00:00Z,10\n"
        "2014-01-01T01:00:00Z,-2\n");
    CHECK_THROWS_WITH_AS(parse_trace_csv(in, {}, "test"),
                         doctest::Contains("test:3"), std::invalid_argument);
  }
  SUBCASE("missing value is rejected") {
    std::istringstream in(
        "timestamp,value\n"
        "2014-01-01T00:00:00Z,\n");
    CHECK_THROWS_AS(parse_trace_csv(in, {}, "test"), std::invalid_argument);
  }
  SUBCASE("non-monotone timestamps are rejected") {
    std::istringstream in(
        "timestamp,value\n"
        "2014-01-01T01:00:00Z,1\n"
        "2014-01-01T00:00:00Z,2\n");
    CHECK_THROWS_AS(parse_trace_csv(in, {}, "test"), std::invalid_argument);
  }
  SUBCASE("bad header is rejected") {
    std::istringstream in("time,value\n2014-01-01T00:00:00Z,1\n");
    CHECK_THROWS_AS(parse_trace_csv(in, {}, "test"), std::invalid_argument);
  }
  SUBCASE("a month of hourly rows fills one reference cycle") {
    std::ostringstream src;
    src << "timestamp,value\n";
    for (int i = 0; i < 28 * 24; ++i)
      src << format_iso8601_utc(1388534400 + 3600LL * i) << ",5\n";
    std::istringstream in(src.str());
    const Trace trace = parse_trace_csv(in, {}, "test");
    CHECK(trace.values.size() == 672);
    CHECK(slice_cycles(trace, 672).size() == 1);
  }
}

TEST_CASE("trace csv round trip preserves samples") {
  SynthProfile profile;
  profile.num_slots = 100;
  profile.burst_probability = 0.1;
  const Trace trace = synth_trace(profile, 5);
  std::ostringstream out;
  write_trace_csv(trace, out);
  std::istringstream in(out.str());
  const Trace parsed = parse_trace_csv(in, {}, "roundtrip");
  REQUIRE(parsed.values.size() == trace.values.size());
  for (size_t i = 0; i < trace.values.size(); ++i) {
    CHECK(parsed.timestamps[i] == trace.timestamps[i]);
    CHECK(parsed.values[i] == doctest::Approx(trace.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("slice cycles") {
  Trace trace;
  trace.unit_scale = 2.0;
  for (int i = 0; i < 2016; ++i) {
    trace.timestamps.push_back(3600LL * i);
    trace.values.push_back(static_cast<double>(i % 100));
  }
  SUBCASE("exact multiple") {
    const auto cycles = slice_cycles(trace, 672);
    REQUIRE(cycles.size() == 3);
    CHECK(cycles[0][1] == 2.0);  // unit scale applied
  }
  SUBCASE("trailing partial window dropped") {
    trace.timestamps.resize(700);
    trace.values.resize(700);
    CHECK(slice_cycles(trace, 672).size() == 1);
  }
  SUBCASE("too short") {
    trace.timestamps.resize(10);
    trace.values.resize(10);
    CHECK_THROWS_AS(slice_cycles(trace, 672), std::invalid_argument);
  }
}

TEST_CASE("two-cycle forecasters") {
  const std::vector<double> d1 = {4.0, 0.0, 7.0};
  const std::vector<double> d2 = {8.0, 0.0, 7.0};
  SUBCASE("deterministic averages the cycles") {
    const DemandScenario s = forecast_deterministic(d1, d2);
    s.validate();
    CHECK(s.is_deterministic());
    CHECK(s.slots[0][0].demand_mbps == 6.0);
    CHECK(s.slots[1][0].demand_mbps == 0.0);
    CHECK(s.slots[2][0].demand_mbps == 7.0);
  }
  SUBCASE("stochastic keeps both as equally likely") {
    const DemandScenario s = forecast_stochastic(d1, d2);
    s.validate();
    CHECK(s.slots[0][0].demand_mbps == 4.0);
    CHECK(s.slots[0][1].demand_mbps == 8.0);
    CHECK(s.slots[0][0].prob == 0.5);
  }
  SUBCASE("deterministic equals the stochastic mean per slot") {
    const auto det = forecast_deterministic(d1, d2).mean_demand();
    const auto sto = forecast_stochastic(d1, d2).mean_demand();
    for (size_t t = 0; t < det.size(); ++t)
      CHECK(det[t] == doctest::Approx(sto[t]));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(forecast_deterministic({1.0}, {1.0, 2.0}),
                    std::invalid_argument);
  }
  SUBCASE("identical cycles collapse") {
    const DemandScenario s = forecast_deterministic(d1, d1);
    for (size_t t = 0; t < d1.size(); ++t)
      CHECK(s.slots[t][0].demand_mbps == d1[t]);
  }
}

TEST_CASE("scenario validation") {
  DemandScenario bad;
  bad.slots = {{{1.0, 0.6}, {2.0, 0.5}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  DemandScenario neg;
  neg.slots = {{{-1.0, 1.0}}};
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("scenario json round trip") {
  DemandScenario scenario;
  scenario.slots = {{{4.0, 0.5}, {8.0, 0.5}}, {{2.5, 1.0}}};
  const nlohmann::json j = scenario_to_json(scenario);
  CHECK(j.at("tau") == 2);
  const DemandScenario back = scenario_from_json(j);
  REQUIRE(back.tau() == 2);
  CHECK(back.slots[0][1].demand_mbps == 8.0);
  CHECK(back.slots[1][0].prob == 1.0);

  nlohmann::json mismatched = j;
  mismatched["tau"] = 3;
  CHECK_THROWS_AS(scenario_from_json(mismatched), std::invalid_argument);
}

TEST_CASE("synthetic traces") {
  SynthProfile profile;
  profile.num_slots = 20000;
  profile.base_mbps = 10.0;
  profile.diurnal_amplitude = 0.2;
  profile.noise_level = 0.05;
  SUBCASE("same seed, same trace") {
    profile.burst_probability = 0.05;
    const Trace a = synth_trace(profile, 123);
    const Trace b = synth_trace(profile, 123);
    CHECK(a.values == b.values);
    const Trace c = synth_trace(profile, 124);
    CHECK(a.values != c.values);
  }
  SUBCASE("no bursts stay under the diurnal ceiling") {
    profile.burst_probability = 0.0;
    const Trace trace = synth_trace(profile, 9);
    const double ceiling =
        profile.base_mbps * (1.0 + profile.diurnal_amplitude) *
        (1.0 + profile.noise_level);
    for (double v : trace.values) CHECK(v <= ceiling + 1e-12);
  }
  SUBCASE("five percent bursts at height five land above twice the peak") {
    profile.burst_probability = 0.05;
    profile.burst_height = 5.0;
    const Trace trace = synth_trace(profile, 77);
    const double peak = profile.base_mbps * (1.0 + profile.diurnal_amplitude);
    int above = 0;
    for (double v : trace.values)
      if (v > 2.0 * peak) ++above;
    const double share = static_cast<double>(above) / profile.num_slots;
    CHECK(share > 0.03);
    CHECK(share < 0.07);
  }
  SUBCASE("profile validation") {
    profile.diurnal_amplitude = 1.5;
    CHECK_THROWS_AS(synth_trace(profile, 1), std::invalid_argument);
  }
}
