#include "burstopt/milp.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "burstopt/detail/format.hpp"

namespace burstopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using detail::format_double;

}  // namespace

int MilpModel::index_of(std::string_view name) const {
  for (size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<int>(i);
  return -1;
}

double MilpModel::objective_at(std::span<const double> assignment) const {
  if (assignment.size() != variables.size())
    throw std::invalid_argument("milp: assignment length mismatch");
  double value = 0.0;
  for (const auto& term : objective) value += term.coeff * assignment[term.var];
  return value;
}

MilpModel build_milp(const DemandScenario& scenario, const UtilitySpec& spec,
                     const BillingPolicy& policy, int tangent_count,
                     std::optional<double> big_L) {
  policy.validate();
  spec.validate();
  scenario.validate();
  if (scenario.tau() != policy.tau)
    throw std::invalid_argument("milp: scenario length does not match tau");
  if (tangent_count < 1)
    throw std::invalid_argument("milp: tangent count must be >= 1");

  const int tau = policy.tau;
  double max_demand = 0.0;
  for (const auto& slot : scenario.slots)
    for (const auto& pm : slot) max_demand = std::max(max_demand, pm.demand_mbps);
  const double L = big_L ? *big_L : max_demand + 1.0;
  if (L < max_demand)
    throw std::invalid_argument("milp: big_L below the largest realization");

  MilpModel model;
  model.big_L = L;

  auto add_var = [&](std::string name, double lower, double upper, bool binary,
                     bool free_var = false) {
    model.variables.push_back(
        {std::move(name), lower, upper, binary, free_var});
    return static_cast<int>(model.variables.size()) - 1;
  };

  std::vector<int> x_idx(tau), rho_idx(tau);
  for (int t = 0; t < tau; ++t)
    x_idx[t] = add_var("x_" + std::to_string(t + 1), 0.0, kInf, false);
  for (int t = 0; t < tau; ++t)
    rho_idx[t] = add_var("rho_" + std::to_string(t + 1), 0.0, 1.0, true);
  const int phi_idx = add_var("phi", 0.0, kInf, false);
  std::vector<std::vector<int>> q_idx(tau), h_idx(tau);
  for (int t = 0; t < tau; ++t) {
    const int k_count = static_cast<int>(scenario.slots[t].size());
    q_idx[t].resize(k_count);
    h_idx[t].resize(k_count);
    for (int k = 0; k < k_count; ++k)
      q_idx[t][k] = add_var(
          "q_" + std::to_string(t + 1) + "_" + std::to_string(k + 1), 0.0, kInf,
          false);
    for (int k = 0; k < k_count; ++k)
      h_idx[t][k] =
          add_var("h_" + std::to_string(t + 1) + "_" + std::to_string(k + 1),
                  -kInf, kInf, false, true);
  }

  // Cap link: x_t - phi + L*rho_t <= L (vacuous when the slot is exempt).
  for (int t = 0; t < tau; ++t)
    model.rows.push_back({"cap_" + std::to_string(t + 1),
                          {{x_idx[t], 1.0}, {phi_idx, -1.0}, {rho_idx[t], L}},
                          RowSense::LessEqual,
                          L});

  // Exactly kept_count slots are counted toward the percentile.
  MilpRow card{"card", {}, RowSense::Equal,
               static_cast<double>(policy.kept_count())};
  for (int t = 0; t < tau; ++t) card.terms.push_back({rho_idx[t], 1.0});
  model.rows.push_back(std::move(card));

  // Served volume per realization: q <= x and q <= demand.
  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k)
      model.rows.push_back(
          {"qx_" + std::to_string(t + 1) + "_" + std::to_string(k + 1),
           {{q_idx[t][k], 1.0}, {x_idx[t], -1.0}},
           RowSense::LessEqual,
           0.0});
  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k)
      model.rows.push_back(
          {"qd_" + std::to_string(t + 1) + "_" + std::to_string(k + 1),
           {{q_idx[t][k], 1.0}},
           RowSense::LessEqual,
           scenario.slots[t][k].demand_mbps});

  // Utility stand-ins stay below every tangent:
  //   h <= U(anchor) + U'(anchor) * (T*q - anchor).
  for (int t = 0; t < tau; ++t) {
    for (size_t k = 0; k < scenario.slots[t].size(); ++k) {
      const TangentSet envelope =
          tangent_envelope(spec, scenario.slots[t][k].demand_mbps,
                           policy.slot_seconds, tangent_count);
      for (size_t n = 0; n < envelope.lines.size(); ++n) {
        const TangentLine& line = envelope.lines[n];
        model.rows.push_back(
            {"tan_" + std::to_string(t + 1) + "_" + std::to_string(k + 1) +
                 "_" + std::to_string(n + 1),
             {{h_idx[t][k], 1.0},
              {q_idx[t][k], -line.slope * policy.slot_seconds}},
             RowSense::LessEqual,
             line.intercept});
      }
    }
  }

  for (int t = 0; t < tau; ++t)
    for (size_t k = 0; k < scenario.slots[t].size(); ++k)
      model.objective.push_back({h_idx[t][k], scenario.slots[t][k].prob});
  model.objective.push_back({phi_idx, -policy.price_delta});
  model.maximize = true;
  return model;
}

namespace {

void write_terms(std::ostream& out, const MilpModel& model,
                 const std::vector<MilpTerm>& terms) {
  size_t line_len = 0;
  bool first = true;
  for (const auto& term : terms) {
    std::string piece;
    if (first) {
      piece = (term.coeff < 0 ? "-" : "") + format_double(std::abs(term.coeff)) + " " +
              model.variables[term.var].name;
      first = false;
    } else {
      piece = (term.coeff < 0 ? " - " : " + ") + format_double(std::abs(term.coeff)) +
              " " + model.variables[term.var].name;
    }
    if (line_len + piece.size() > 200) {
      out << "\n   ";
      line_len = 3;
    }
    out << piece;
    line_len += piece.size();
  }
}

}  // namespace

void export_lp(const MilpModel& model, std::ostream& out) {
  out << (model.maximize ? "Maximize\n" : "Minimize\n");
  out << " obj: ";
  write_terms(out, model, model.objective);
  out << "\nSubject To\n";
  for (const auto& row : model.rows) {
    out << " " << row.name << ": ";
    write_terms(out, model, row.terms);
    out << (row.sense == RowSense::Equal ? " = " : " <= ") << format_double(row.rhs)
        << "\n";
  }
  bool bounds_header = false;
  for (const auto& var : model.variables) {
    if (var.is_binary) continue;
    if (var.is_free) {
      if (!bounds_header) {
        out << "Bounds\n";
        bounds_header = true;
      }
      out << " " << var.name << " free\n";
    }
  }
  bool binary_header = false;
  for (const auto& var : model.variables) {
    if (!var.is_binary) continue;
    if (!binary_header) {
      out << "Binary\n";
      binary_header = true;
    }
    out << " " << var.name << "\n";
  }
  out << "End\n";
}

void export_lp(const MilpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("milp: cannot write '" + path + "'");
  export_lp(model, out);
}

std::string export_lp_string(const MilpModel& model) {
  std::ostringstream out;
  export_lp(model, out);
  return out.str();
}

}  // namespace burstopt
