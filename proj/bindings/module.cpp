#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "burstopt/billing.hpp"
#include "burstopt/common.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/milp.hpp"
#include "burstopt/multi_provider.hpp"
#include "burstopt/plan.hpp"
#include "burstopt/planner_deterministic.hpp"
#include "burstopt/planner_stochastic.hpp"
#include "burstopt/realtime.hpp"
#include "burstopt/utility.hpp"

namespace py = pybind11;
using namespace burstopt;

namespace {

DemandScenario scenario_from_lists(
    const std::vector<std::vector<std::pair<double, double>>>& slots) {
  DemandScenario scenario;
  scenario.slots.reserve(slots.size());
  for (const auto& slot : slots) {
    std::vector<ProbMass> dist;
    dist.reserve(slot.size());
    for (const auto& [demand, prob] : slot) dist.push_back({demand, prob});
    scenario.slots.push_back(std::move(dist));
  }
  scenario.validate();
  return scenario;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Planning under burstable (percentile) bandwidth billing";

  py::register_exception<SolverGuardError>(m, "SolverGuardError",
                                           PyExc_RuntimeError);

  py::class_<BillingPolicy>(m, "BillingPolicy")
      .def(py::init<>())
      .def(py::init([](int tau, double slot_seconds, double percentile_q,
                       double price_delta) {
             BillingPolicy p{tau, slot_seconds, percentile_q, price_delta};
             p.validate();
             return p;
           }),
           py::arg("tau"), py::arg("slot_seconds") = 3600.0,
           py::arg("percentile_q") = 0.95, py::arg("price_delta") = 15.0)
      .def_readwrite("tau", &BillingPolicy::tau)
      .def_readwrite("slot_seconds", &BillingPolicy::slot_seconds)
      .def_readwrite("percentile_q", &BillingPolicy::percentile_q)
      .def_readwrite("price_delta", &BillingPolicy::price_delta)
      .def("kept_count", &BillingPolicy::kept_count)
      .def("burst_budget", &BillingPolicy::burst_budget);

  py::class_<UtilitySpec>(m, "UtilitySpec")
      .def(py::init<>())
      .def(py::init([](double factor_A, double curvature_a, double eval_floor) {
             UtilitySpec s{factor_A, curvature_a, eval_floor};
             s.validate();
             return s;
           }),
           py::arg("factor_A") = 0.08, py::arg("curvature_a") = 0.1,
           py::arg("eval_floor") = 1e-6)
      .def_readwrite("factor_A", &UtilitySpec::factor_A)
      .def_readwrite("curvature_a", &UtilitySpec::curvature_a)
      .def_readwrite("eval_floor", &UtilitySpec::eval_floor);

  py::class_<DemandScenario>(m, "DemandScenario")
      .def_static("deterministic", &DemandScenario::deterministic,
                  py::arg("demand"))
      .def_static("from_realizations", &scenario_from_lists, py::arg("slots"),
                  "slots: per slot, a list of (demand_mbps, prob) pairs")
      .def("tau", &DemandScenario::tau)
      .def("is_deterministic", &DemandScenario::is_deterministic)
      .def("mean_demand", &DemandScenario::mean_demand)
      .def("max_demand", &DemandScenario::max_demand)
      .def("to_json", [](const DemandScenario& s) {
        return scenario_to_json(s).dump(2);
      });
  m.def("scenario_from_json", [](const std::string& text) {
    return scenario_from_json(nlohmann::json::parse(text));
  });

  py::class_<Plan>(m, "Plan")
      .def_readonly("planned_usage", &Plan::planned_usage)
      .def_readonly("burst_mask", &Plan::burst_mask)
      .def_readonly("cap_phi", &Plan::cap_phi)
      .def_readonly("expected_cost", &Plan::expected_cost)
      .def_readonly("expected_surplus", &Plan::expected_surplus)
      .def_readonly("solver_tag", &Plan::solver_tag)
      .def("to_json", [](const Plan& p) { return plan_to_json(p).dump(2); });

  py::class_<ProviderSet>(m, "ProviderSet")
      .def(py::init([](const BillingPolicy& base, std::vector<double> prices) {
             ProviderSet s{base, std::move(prices)};
             s.validate();
             return s;
           }),
           py::arg("base"), py::arg("price_deltas"))
      .def_readonly("price_deltas", &ProviderSet::price_deltas)
      .def("count", &ProviderSet::count);

  py::class_<MultiPlan>(m, "MultiPlan")
      .def_readonly("provider_plans", &MultiPlan::provider_plans)
      .def_readonly("expected_cost", &MultiPlan::expected_cost)
      .def_readonly("expected_surplus", &MultiPlan::expected_surplus)
      .def_readonly("round_surplus", &MultiPlan::round_surplus);

  m.def("burst_budget", &burst_budget, py::arg("policy"));
  m.def("percentile_usage", &percentile_usage, py::arg("series"),
        py::arg("policy"));
  m.def(
      "percentile_usage_via_mask",
      [](const UsageSeries& series, const BillingPolicy& policy) {
        const auto out = percentile_usage_via_mask(series, policy);
        return py::make_tuple(out.value, out.mask);
      },
      py::arg("series"), py::arg("policy"));
  m.def("billing_cost", &billing_cost, py::arg("series"), py::arg("policy"));

  m.def("utility_value", &utility_value, py::arg("spec"), py::arg("volume_mb"));
  m.def("utility_derivative", &utility_derivative, py::arg("spec"),
        py::arg("volume_mb"));
  m.def(
      "expected_slot_utility",
      [](const UtilitySpec& spec,
         const std::vector<std::pair<double, double>>& dist, double slot_seconds,
         double usage) {
        std::vector<ProbMass> pms;
        for (const auto& [d, p] : dist) pms.push_back({d, p});
        return expected_slot_utility(spec, pms, slot_seconds, usage);
      },
      py::arg("spec"), py::arg("slot_dist"), py::arg("slot_seconds"),
      py::arg("usage_mbps"));

  m.def("forecast_deterministic", &forecast_deterministic, py::arg("prev1"),
        py::arg("prev2"));
  m.def("forecast_stochastic", &forecast_stochastic, py::arg("prev1"),
        py::arg("prev2"));

  m.def("select_free_slots", &select_free_slots, py::arg("demand"),
        py::arg("policy"));
  m.def("solve_deterministic", &solve_deterministic, py::arg("scenario"),
        py::arg("spec"), py::arg("policy"), py::arg("tol_rel") = 1e-9);
  m.def(
      "evaluate_expected_surplus",
      [](const UsageSeries& usage, const DemandScenario& scenario,
         const UtilitySpec& spec, const BillingPolicy& policy) {
        const auto out = evaluate_expected_surplus(usage, scenario, spec, policy);
        return py::make_tuple(out.surplus, out.cost, out.net_utility);
      },
      py::arg("usage"), py::arg("scenario"), py::arg("spec"), py::arg("policy"));
  m.def("solve_sweep", &solve_sweep, py::arg("scenario"), py::arg("spec"),
        py::arg("policy"), py::arg("tol_rel") = 1e-9);
  m.def(
      "solve_oracle",
      [](const DemandScenario& scenario, const UtilitySpec& spec,
         const BillingPolicy& policy, std::optional<double> stop_gap) {
        return solve_oracle(scenario, spec, policy, {stop_gap});
      },
      py::arg("scenario"), py::arg("spec"), py::arg("policy"),
      py::arg("stop_gap") = std::nullopt);
  m.def("near_gap", &near_gap, py::arg("lower_bound"), py::arg("upper_bound"));

  m.def(
      "export_lp",
      [](const DemandScenario& scenario, const UtilitySpec& spec,
         const BillingPolicy& policy, int tangents) {
        return export_lp_string(build_milp(scenario, spec, policy, tangents));
      },
      py::arg("scenario"), py::arg("spec"), py::arg("policy"),
      py::arg("tangents") = 3);
  m.def(
      "export_lp_multi",
      [](const DemandScenario& scenario, const UtilitySpec& spec,
         const ProviderSet& providers, int tangents) {
        return export_lp_string(
            build_milp_multi(scenario, spec, providers, tangents));
      },
      py::arg("scenario"), py::arg("spec"), py::arg("providers"),
      py::arg("tangents") = 3);

  py::class_<MultiSolveOptions>(m, "MultiSolveOptions")
      .def(py::init<>())
      .def_readwrite("rounds_max", &MultiSolveOptions::rounds_max)
      .def_readwrite("tol_rel", &MultiSolveOptions::tol_rel);
  m.def("solve_multi", &solve_multi, py::arg("scenario"), py::arg("spec"),
        py::arg("providers"), py::arg("options") = MultiSolveOptions{});

  m.def("update_usage", &update_usage, py::arg("plan"), py::arg("exposed"),
        py::arg("policy"));
  m.def(
      "realized_surplus",
      [](const UsageSeries& updated, const UtilitySpec& spec,
         const BillingPolicy& policy) {
        return realized_surplus(updated, spec, policy);
      },
      py::arg("updated"), py::arg("spec"), py::arg("policy"));
}
