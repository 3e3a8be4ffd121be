"""Planning toolkit for burstable (percentile) bandwidth billing."""

from ._core import (
    BillingPolicy,
    DemandScenario,
    MultiPlan,
    MultiSolveOptions,
    Plan,
    ProviderSet,
    SolverGuardError,
    UtilitySpec,
    billing_cost,
    burst_budget,
    evaluate_expected_surplus,
    expected_slot_utility,
    export_lp,
    export_lp_multi,
    forecast_deterministic,
    forecast_stochastic,
    near_gap,
    percentile_usage,
    percentile_usage_via_mask,
    realized_surplus,
    scenario_from_json,
    select_free_slots,
    solve_deterministic,
    solve_multi,
    solve_oracle,
    solve_sweep,
    update_usage,
    utility_derivative,
    utility_value,
)

__all__ = [
    "BillingPolicy",
    "DemandScenario",
    "MultiPlan",
    "MultiSolveOptions",
    "Plan",
    "ProviderSet",
    "SolverGuardError",
    "UtilitySpec",
    "billing_cost",
    "burst_budget",
    "evaluate_expected_surplus",
    "expected_slot_utility",
    "export_lp",
    "export_lp_multi",
    "forecast_deterministic",
    "forecast_stochastic",
    "near_gap",
    "percentile_usage",
    "percentile_usage_via_mask",
    "realized_surplus",
    "scenario_from_json",
    "select_free_slots",
    "solve_deterministic",
    "solve_multi",
    "solve_oracle",
    "solve_sweep",
    "update_usage",
    "utility_derivative",
    "utility_value",
]

__version__ = "0.1.0"
