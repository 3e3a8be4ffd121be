#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "burstopt/billing.hpp"
#include "burstopt/demand.hpp"
#include "burstopt/utility.hpp"

namespace burstopt {

struct MilpVariable {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;  ///< +inf for unbounded above
  bool is_binary = false;
  bool is_free = false;  ///< unbounded on both sides
};

struct MilpTerm {
  int var = 0;
  double coeff = 0.0;
};

enum class RowSense { LessEqual, Equal };

struct MilpRow {
  std::string name;
  std::vector<MilpTerm> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

/// A mixed-integer linear model in construction order. Variable and row
/// naming is deterministic so an export is byte-stable across runs.
struct MilpModel {
  std::vector<MilpVariable> variables;
  std::vector<MilpRow> rows;
  std::vector<MilpTerm> objective;
  bool maximize = true;
  double big_L = 0.0;

  int index_of(std::string_view name) const;  ///< -1 when absent
  double objective_at(std::span<const double> assignment) const;
};

/// Linearized stochastic surplus model: continuous usage and cap variables,
/// binary exempt mask, served-volume variables Q bounded by usage and demand,
/// and utility stand-ins h bounded by `tangent_count` tangents of the utility
/// curve anchored per realization. big_L defaults to one above the largest
/// realization so the cap link is vacuous on exempt slots.
MilpModel build_milp(const DemandScenario& scenario, const UtilitySpec& spec,
                     const BillingPolicy& policy, int tangent_count,
                     std::optional<double> big_L = std::nullopt);

/// CPLEX LP-format text: Maximize / Subject To / Bounds / Binary / End, in
/// model order, shortest round-trip number formatting; re-exports are
/// byte-identical.
void export_lp(const MilpModel& model, std::ostream& out);
void export_lp(const MilpModel& model, const std::string& path);
std::string export_lp_string(const MilpModel& model);

}  // namespace burstopt
