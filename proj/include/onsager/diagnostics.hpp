#ifndef ONSAGER_DIAGNOSTICS_HPP
#define ONSAGER_DIAGNOSTICS_HPP

#include <vector>

#include "onsager/step.hpp"

namespace onsager {

/// One per-step record of the quantities the scheme guarantees.
struct DiagnosticsRow {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double dissipation_over_tau = 0.0;
  double kkt_residual = 0.0;
  double constraint_residual = 0.0;
  int inner_iterations = 0;
  std::vector<double> mass;       // per component
  std::vector<double> min_value;  // per component
  std::vector<double> max_value;  // per component
};

/// integrate_cells per component.
std::vector<double> mass_totals(const SystemState& state);

DiagnosticsRow make_row(int step, double time, const StepResult& result,
                        double tau);

/// True iff energy_new + dissipation_over_tau <= energy_prev within the
/// scheme's slack, i.e. the per-step energy-dissipation inequality holds.
bool check_dissipation_inequality(const DiagnosticsRow& row_prev,
                                  const DiagnosticsRow& row_new);

/// Norm of (grad L + B^T lambda, B theta - b); same definition the solvers use.
double kkt_residual_report(const StepProblem& problem, const KKTPoint& point);

}  // namespace onsager

#endif
