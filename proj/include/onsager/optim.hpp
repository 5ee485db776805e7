#ifndef ONSAGER_OPTIM_HPP
#define ONSAGER_OPTIM_HPP

#include <optional>
#include <vector>

#include "onsager/errors.hpp"

namespace onsager {

enum class OptimMethod { ProjectedGD, AEPG, NewtonKKT };

struct OptimizerConfig {
  OptimMethod method = OptimMethod::NewtonKKT;
  double eta = 0.1;                   // base step size for first-order methods
  std::optional<double> aepg_shift;   // c; default 1 + max(0, -L(theta0))
  int max_iterations = 0;             // 0 -> 50 for Newton, 50000 first-order
  double kkt_tolerance = 1e-9;        // scaled by (1 + |grad L(theta0)|) at start
  double linear_tolerance = 1e-12;    // inner CG solves on B B^T
  double damping = 0.95;              // fraction-to-boundary factor
};

struct KKTPoint {
  std::vector<double> theta;
  std::vector<double> multipliers;
  double kkt_residual = 0.0;
  int iterations = 0;
  // AEPG: the r_k sequence (non-increasing for any eta).
  // NewtonKKT: the accepted KKT residual sequence.
  std::vector<double> r_trace;
  // Largest |B theta_k - b| seen over all iterates of the run.
  double max_constraint_violation = 0.0;
  // False when the iteration cap was reached above tolerance; the point is
  // still the best iterate so callers can inspect partial progress.
  bool converged = true;
  double tolerance_used = 0.0;
};

/// One equality-constrained minimization min L(theta) s.t. B theta = b,
/// evaluated matrix-free. Norms throughout are plain Euclidean norms on the
/// coefficient vectors.
class ConstrainedProblem {
public:
  virtual ~ConstrainedProblem() = default;

  virtual int dim() const = 0;
  virtual int constraint_dim() const = 0;
  virtual std::vector<double> initial_point() const = 0;

  virtual double value(const std::vector<double>& theta) const = 0;
  virtual std::vector<double> gradient(const std::vector<double>& theta) const = 0;
  virtual std::vector<double> hessian_vec(const std::vector<double>& theta,
                                          const std::vector<double>& v) const = 0;

  /// Matrix action B * theta (the affine right-hand side lives in constraint_rhs).
  virtual std::vector<double> constraint_apply(const std::vector<double>& theta) const = 0;
  virtual std::vector<double> constraint_apply_transpose(const std::vector<double>& lambda) const = 0;
  virtual std::vector<double> constraint_rhs() const = 0;

  /// Whether theta lies strictly inside the barrier domain (true when there
  /// is no barrier).
  virtual bool interior(const std::vector<double>&) const { return true; }

  /// Largest alpha in (0, 1] such that theta + alpha*step keeps barrier
  /// variables at least (1 - damping) of their current distance from the
  /// boundary; 1 when there is no barrier.
  virtual double max_step_fraction(const std::vector<double>& theta,
                                   const std::vector<double>& step,
                                   double damping) const {
    (void)theta; (void)step; (void)damping;
    return 1.0;
  }

  /// Tikhonov shift added to B B^T when a redundant constraint row makes the
  /// multiplier non-unique (minimum-norm multiplier selection).
  virtual double projection_regularization() const { return 0.0; }

  // Optional structure hooks. When has_nullspace_basis() is true, the
  // problem supplies an exact parameterization of the constraint kernel:
  // range(N) = ker(B) with N injective, and constraint_particular_solution
  // returns some d with B d = r exactly. Newton then solves the reduced
  // system N^T H N without any inner projection solves.
  virtual bool has_nullspace_basis() const { return false; }
  virtual int nullspace_dim() const { return 0; }
  virtual std::vector<double> nullspace_apply(const std::vector<double>&) const {
    throw Error("problem advertises no nullspace basis");
  }
  virtual std::vector<double> nullspace_apply_transpose(
      const std::vector<double>&) const {
    throw Error("problem advertises no nullspace basis");
  }
  virtual std::vector<double> constraint_particular_solution(
      const std::vector<double>&) const {
    throw Error("problem advertises no nullspace basis");
  }

  // Optional closed-form multiplier estimate from a gradient (a valid
  // stationarity-zeroing choice, not necessarily the least-squares one).
  virtual bool has_direct_multipliers() const { return false; }
  virtual std::vector<double> direct_multipliers(
      const std::vector<double>& grad) const {
    (void)grad;
    throw Error("problem advertises no direct multipliers");
  }
};

/// Nullspace projection G v = v - B^T (B B^T)^-1 B v, applied matrix-free
/// with an inner conjugate-gradient solve on B B^T.
std::vector<double> apply_projection(const ConstrainedProblem& problem,
                                     const std::vector<double>& v,
                                     double tolerance = 1e-12);

/// Least-squares multiplier estimate lambda = -(B B^T)^-1 B grad, so that
/// grad + B^T lambda is the projected gradient.
std::vector<double> least_squares_multipliers(const ConstrainedProblem& problem,
                                              const std::vector<double>& grad,
                                              double tolerance = 1e-12);

/// || (grad L + B^T lambda, B theta - b) ||_2 — the single residual
/// definition shared by the solvers and the diagnostics module.
double kkt_residual(const ConstrainedProblem& problem,
                    const std::vector<double>& theta,
                    const std::vector<double>& lambda);

KKTPoint projected_gradient(const ConstrainedProblem& problem,
                            const OptimizerConfig& config);
KKTPoint aepg(const ConstrainedProblem& problem, const OptimizerConfig& config);
KKTPoint newton_kkt(const ConstrainedProblem& problem,
                    const OptimizerConfig& config);

/// Dispatch on config.method.
KKTPoint minimize(const ConstrainedProblem& problem,
                  const OptimizerConfig& config);

}  // namespace onsager

#endif
