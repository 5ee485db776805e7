#include "onsager/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace onsager {

std::vector<double> mass_totals(const SystemState& state) {
  std::vector<double> out;
  out.reserve(state.components.size());
  for (const CellField& u : state.components) out.push_back(integrate_cells(u));
  return out;
}

DiagnosticsRow make_row(int step, double time, const StepResult& result,
                        double tau) {
  DiagnosticsRow row;
  row.step = step;
  row.time = time;
  row.energy = result.energy_after;
  row.dissipation_over_tau = result.dissipation_value / tau;
  row.kkt_residual = result.kkt_residual;
  row.constraint_residual = result.constraint_residual;
  row.inner_iterations = result.iterations;
  row.mass = mass_totals(result.state);
  for (const CellField& u : result.state.components) {
    row.min_value.push_back(*std::min_element(u.values.begin(), u.values.end()));
    row.max_value.push_back(*std::max_element(u.values.begin(), u.values.end()));
  }
  return row;
}

bool check_dissipation_inequality(const DiagnosticsRow& row_prev,
                                  const DiagnosticsRow& row_new) {
  return row_new.energy + row_new.dissipation_over_tau <=
         row_prev.energy +
             kEnergyInequalitySlack * (1.0 + std::abs(row_prev.energy));
}

double kkt_residual_report(const StepProblem& problem, const KKTPoint& point) {
  return kkt_residual(problem, point.theta, point.multipliers);
}

}  // namespace onsager
