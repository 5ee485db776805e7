#ifndef ONSAGER_STEP_HPP
#define ONSAGER_STEP_HPP

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "onsager/models.hpp"
#include "onsager/optim.hpp"

namespace onsager {

/// Constraint residual accepted for a converged step.
inline constexpr double kConstraintTolerance = 1e-11;

/// Slack allowed on the per-step energy-dissipation inequality,
/// E_new + Phi/tau <= E_old + slack * (1 + |E_old|).
inline constexpr double kEnergyInequalitySlack = 1e-9;

// ---------------------------------------------------------------------------
// ODE minimizing movement
// ---------------------------------------------------------------------------

/// Potential callbacks for the ODE scheme. The Hessian is optional; a
/// central-difference approximation of the gradient is used when absent.
struct OdePotential {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;  // optional
};

/// argmin_y U(y) + (1/(2 tau)) |y - y_k|_A^2 by damped Newton iteration.
/// A must be symmetric positive definite. Returns a stationary point with
/// objective-gradient norm <= tolerance (the global minimizer for convex U).
Eigen::VectorXd ode_minimizing_movement(const Eigen::MatrixXd& metric,
                                        const OdePotential& potential,
                                        const Eigen::VectorXd& y_k, double tau,
                                        double tolerance = 1e-10);

// ---------------------------------------------------------------------------
// PDE time step
// ---------------------------------------------------------------------------

/// One discrete time step as a constrained minimization over theta.
/// Conserved models: theta = (u, m) with u-blocks first (species-major) and
/// m-blocks after (species-major, axis-major); constraint rows are
/// u_i - u_i^k + d_h m_i = 0 per cell and species, plus one row
/// sum_i (d_h m_i) = 0 per cell when the model carries the simplex
/// constraint. Allen-Cahn: theta = u, no constraints.
class StepProblem : public ConstrainedProblem {
public:
  StepProblem(ModelSpec model, SystemState previous, double tau,
              const PeriodicGrid& grid);

  const ModelSpec& model() const { return model_; }
  const SystemState& previous() const { return previous_; }
  const PeriodicGrid& grid() const { return grid_; }
  double tau() const { return tau_; }
  int species() const { return species_; }
  int state_dim() const { return n_u_; }
  int flux_dim() const { return n_m_; }

  SystemState unpack_state(const std::vector<double>& theta) const;
  std::vector<FaceField> unpack_flux(const std::vector<double>& theta) const;

  // ConstrainedProblem surface
  int dim() const override { return n_u_ + n_m_; }
  int constraint_dim() const override { return n_constraints_; }
  std::vector<double> initial_point() const override;
  double value(const std::vector<double>& theta) const override;
  std::vector<double> gradient(const std::vector<double>& theta) const override;
  std::vector<double> hessian_vec(const std::vector<double>& theta,
                                  const std::vector<double>& v) const override;
  std::vector<double> constraint_apply(const std::vector<double>& theta) const override;
  std::vector<double> constraint_apply_transpose(
      const std::vector<double>& lambda) const override;
  std::vector<double> constraint_rhs() const override;
  bool interior(const std::vector<double>& theta) const override;
  double max_step_fraction(const std::vector<double>& theta,
                           const std::vector<double>& step,
                           double damping) const override;
  double projection_regularization() const override {
    return simplex_ ? 1e-12 : 0.0;
  }

private:
  double dissipation_term(const std::vector<double>& theta) const;

  ModelSpec model_;
  SystemState previous_;
  PeriodicGrid grid_;
  double tau_;
  int species_;
  int n_u_;
  int n_m_;
  int n_constraints_;
  bool conserved_;
  bool barrier_;
  bool simplex_;
  bool joint_metric_ = false;
  // Inverse face mobilities frozen at u^k, scaled by h^d: the dissipation is
  // (1/2) sum q m^2 for the diagonal metrics. Maxwell-Stefan instead keeps
  // the face averages of u^k.
  std::vector<std::vector<double>> metric_weight_;
  std::vector<FaceField> uhat_;
};

StepProblem build_step(const ModelSpec& model, const SystemState& previous,
                       double tau, const PeriodicGrid& grid);

struct StepResult {
  SystemState state;
  std::vector<FaceField> flux;  // empty for Allen-Cahn
  double energy_before = 0.0;
  double energy_after = 0.0;
  double dissipation_value = 0.0;
  int iterations = 0;
  double constraint_residual = 0.0;
  double kkt_residual = 0.0;
  std::vector<double> multipliers;
};

/// Runs the configured inner solver on the step problem and validates the
/// scheme's structural guarantees (constraint residual, positivity, simplex,
/// energy-dissipation inequality). Throws NoConvergence when the solver
/// result does not honor them.
StepResult advance(const StepProblem& problem, const OptimizerConfig& config);

}  // namespace onsager

#endif
