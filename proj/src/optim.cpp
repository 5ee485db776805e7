#include "onsager/optim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace onsager {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double a, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vec subtract(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

int first_order_cap(const OptimizerConfig& c) {
  return c.max_iterations > 0 ? c.max_iterations : 50000;
}

int newton_cap(const OptimizerConfig& c) {
  return c.max_iterations > 0 ? c.max_iterations : 50;
}

// CG solve of (B B^T + reg I) x = rhs on the normalized right-hand side, so
// the tolerance acts relatively. Deterministic; zero initial guess.
Vec gram_solve(const ConstrainedProblem& problem, const Vec& rhs,
               double tolerance) {
  const int l = problem.constraint_dim();
  Vec x(l, 0.0);
  if (l == 0) return x;
  const double reg = problem.projection_regularization();
  auto apply = [&](const Vec& w) {
    Vec out = problem.constraint_apply(problem.constraint_apply_transpose(w));
    if (reg > 0.0) axpy(reg, w, out);
    return out;
  };
  const double rhs_norm = norm(rhs);
  if (rhs_norm == 0.0) return x;
  Vec r = rhs;
  for (double& v : r) v /= rhs_norm;
  Vec p = r;
  double rr = 1.0;
  const int cap = std::max(1000, 40 * l);
  auto finish = [&]() {
    for (double& v : x) v *= rhs_norm;
    return x;
  };
  for (int it = 0; it < cap; ++it) {
    if (std::sqrt(rr) <= tolerance) return finish();
    Vec ap = apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0.0))
      throw NoConvergence("projection CG lost positive definiteness",
                          std::sqrt(rr), it);
    const double alpha = rr / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < l; ++i) p[i] = r[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= tolerance) return finish();
  throw NoConvergence("projection CG did not converge", std::sqrt(rr), cap);
}

Vec constraint_residual_vec(const ConstrainedProblem& problem, const Vec& theta) {
  if (problem.constraint_dim() == 0) return {};
  return subtract(problem.constraint_apply(theta), problem.constraint_rhs());
}

// Pull theta back onto the affine constraint set (minimum-norm correction).
void restore_feasibility(const ConstrainedProblem& problem, Vec& theta,
                         double tolerance) {
  if (problem.constraint_dim() == 0) return;
  Vec c = constraint_residual_vec(problem, theta);
  if (norm(c) <= tolerance) return;
  Vec w = gram_solve(problem, c, 0.01 * tolerance);
  Vec corr = problem.constraint_apply_transpose(w);
  axpy(-1.0, corr, theta);
}

struct ResidualParts {
  double stationarity = 0.0;
  double feasibility = 0.0;
  double total() const {
    return std::sqrt(stationarity * stationarity + feasibility * feasibility);
  }
};

ResidualParts residual_parts(const ConstrainedProblem& problem, const Vec& theta,
                             const Vec& grad, const Vec& lambda) {
  ResidualParts out;
  if (problem.constraint_dim() == 0) {
    out.stationarity = norm(grad);
    return out;
  }
  Vec st = problem.constraint_apply_transpose(lambda);
  axpy(1.0, grad, st);
  out.stationarity = norm(st);
  out.feasibility = norm(constraint_residual_vec(problem, theta));
  return out;
}

// Shrink the increment until the barrier accepts it; the caller decides what
// to do with the returned scale.
double shrink_until_interior(const ConstrainedProblem& problem, const Vec& theta,
                             const Vec& step, double scale) {
  Vec candidate(theta.size());
  for (int halvings = 0; halvings < 80; ++halvings) {
    for (size_t i = 0; i < theta.size(); ++i)
      candidate[i] = theta[i] + scale * step[i];
    if (problem.interior(candidate)) return scale;
    scale *= 0.5;
  }
  throw NoConvergence("step could not be shrunk into the barrier domain", 0.0, 0);
}

}  // namespace

Vec apply_projection(const ConstrainedProblem& problem, const Vec& v,
                     double tolerance) {
  if (problem.constraint_dim() == 0) return v;
  Vec bv = problem.constraint_apply(v);
  Vec w = gram_solve(problem, bv, tolerance);
  Vec out = v;
  Vec corr = problem.constraint_apply_transpose(w);
  axpy(-1.0, corr, out);
  return out;
}

Vec least_squares_multipliers(const ConstrainedProblem& problem, const Vec& grad,
                              double tolerance) {
  if (problem.constraint_dim() == 0) return {};
  Vec bg = problem.constraint_apply(grad);
  Vec w = gram_solve(problem, bg, tolerance);
  for (double& x : w) x = -x;
  return w;
}

double kkt_residual(const ConstrainedProblem& problem, const Vec& theta,
                    const Vec& lambda) {
  return residual_parts(problem, theta, problem.gradient(theta), lambda).total();
}

// ---------------------------------------------------------------------------
// Projected gradient descent: theta <- theta - eta G grad L
// ---------------------------------------------------------------------------

KKTPoint projected_gradient(const ConstrainedProblem& problem,
                            const OptimizerConfig& config) {
  const double lin_tol = config.linear_tolerance;
  Vec theta = problem.initial_point();
  Vec grad = problem.gradient(theta);
  const double tol_eff = config.kkt_tolerance * (1.0 + norm(grad));
  const double b_scale =
      problem.constraint_dim() == 0 ? 1.0 : 1.0 + norm(problem.constraint_rhs());
  const int cap = first_order_cap(config);

  double max_drift = 0.0;
  int it = 0;
  for (; it < cap; ++it) {
    Vec v = apply_projection(problem, grad, lin_tol);
    Vec c = constraint_residual_vec(problem, theta);
    max_drift = std::max(max_drift, norm(c));
    const double res = std::hypot(norm(v), norm(c));
    if (res <= tol_eff) break;

    double scale = shrink_until_interior(problem, theta, v, -config.eta);
    axpy(scale, v, theta);

    const double drift = norm(constraint_residual_vec(problem, theta));
    max_drift = std::max(max_drift, drift);
    if (drift > 1e-12 * b_scale)
      restore_feasibility(problem, theta, 1e-13 * b_scale);
    grad = problem.gradient(theta);
  }

  KKTPoint out;
  out.multipliers = least_squares_multipliers(problem, grad, lin_tol);
  out.kkt_residual = residual_parts(problem, theta, grad, out.multipliers).total();
  out.theta = std::move(theta);
  out.iterations = it;
  out.max_constraint_violation = max_drift;
  out.converged = out.kkt_residual <= tol_eff;
  out.tolerance_used = tol_eff;
  return out;
}

// ---------------------------------------------------------------------------
// AEPG: v_k = G grad l, r_{k+1} = r_k / (1 + 2 eta |v_k|^2),
//       theta_{k+1} = theta_k - 2 eta r_{k+1} v_k,  l = sqrt(L + c)
// ---------------------------------------------------------------------------

KKTPoint aepg(const ConstrainedProblem& problem, const OptimizerConfig& config) {
  const double lin_tol = config.linear_tolerance;
  Vec theta = problem.initial_point();
  double L = problem.value(theta);
  const double shift =
      config.aepg_shift ? *config.aepg_shift : 1.0 + std::max(0.0, -L);
  if (!(L + shift > 0.0))
    throw ShiftViolation("aepg shift violates L + c > 0 at the initial point");

  Vec grad = problem.gradient(theta);
  const double tol_eff = config.kkt_tolerance * (1.0 + norm(grad));
  const double b_scale =
      problem.constraint_dim() == 0 ? 1.0 : 1.0 + norm(problem.constraint_rhs());
  const int cap = first_order_cap(config);

  double r = std::sqrt(L + shift);
  std::vector<double> r_trace{r};

  double max_drift = 0.0;
  int it = 0;
  for (; it < cap; ++it) {
    Vec pg = apply_projection(problem, grad, lin_tol);
    Vec c = constraint_residual_vec(problem, theta);
    max_drift = std::max(max_drift, norm(c));
    const double res = std::hypot(norm(pg), norm(c));
    if (res <= tol_eff) break;

    Vec v = pg;
    const double ell = std::sqrt(L + shift);
    for (double& x : v) x /= 2.0 * ell;

    const double r_next = r / (1.0 + 2.0 * config.eta * dot(v, v));
    r_trace.push_back(r_next);

    // The r recursion above is exactly the printed formula; only the theta
    // increment is shrunk when the barrier rejects the full move.
    double scale =
        shrink_until_interior(problem, theta, v, -2.0 * config.eta * r_next);
    axpy(scale, v, theta);
    r = r_next;

    const double drift = norm(constraint_residual_vec(problem, theta));
    max_drift = std::max(max_drift, drift);
    if (drift > 1e-12 * b_scale)
      restore_feasibility(problem, theta, 1e-13 * b_scale);
    L = problem.value(theta);
    if (!(L + shift > 0.0))
      throw ShiftViolation("aepg shift violated along the iteration");
    grad = problem.gradient(theta);
  }

  KKTPoint out;
  out.multipliers = least_squares_multipliers(problem, grad, lin_tol);
  out.kkt_residual = residual_parts(problem, theta, grad, out.multipliers).total();
  out.theta = std::move(theta);
  out.iterations = it;
  out.r_trace = std::move(r_trace);
  out.max_constraint_violation = max_drift;
  out.converged = out.kkt_residual <= tol_eff;
  out.tolerance_used = tol_eff;
  return out;
}

// ---------------------------------------------------------------------------
// Newton on the KKT system
// ---------------------------------------------------------------------------

namespace {

// Dense assembly-and-factorize path for small systems.
Vec newton_direction_dense(const ConstrainedProblem& problem, const Vec& theta,
                           const Vec& grad, const Vec& c_res) {
  const int n = problem.dim();
  const int l = problem.constraint_dim();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + l, n + l);
  Vec e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vec hj = problem.hessian_vec(theta, e);
    Vec bj = l > 0 ? problem.constraint_apply(e) : Vec{};
    for (int i = 0; i < n; ++i) K(i, j) = hj[i];
    for (int i = 0; i < l; ++i) {
      K(n + i, j) = bj[i];
      K(j, n + i) = bj[i];
    }
    e[j] = 0.0;
  }
  Eigen::VectorXd rhs(n + l);
  for (int i = 0; i < n; ++i) rhs(i) = -grad[i];
  for (int i = 0; i < l; ++i) rhs(n + i) = -c_res[i];

  const double h_scale = std::max(1.0, K.topLeftCorner(n, n).cwiseAbs().maxCoeff());
  for (double sigma : {0.0, 1e-12, 1e-8, 1e-4, 1e-2, 1.0}) {
    Eigen::MatrixXd Ks = K;
    for (int i = 0; i < n; ++i) Ks(i, i) += sigma * h_scale;
    for (int i = 0; i < l; ++i) Ks(n + i, n + i) -= 1e-14 * h_scale;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Ks);
    Eigen::VectorXd z = lu.solve(rhs);
    if (!z.allFinite()) continue;
    const double rel = (Ks * z - rhs).norm() / std::max(1.0, rhs.norm());
    if (rel < 1e-8) {
      Vec step(n);
      for (int i = 0; i < n; ++i) step[i] = z(i);
      return step;
    }
  }
  throw SingularSystem("dense KKT solve failed after regularization");
}

// Projected CG on the nullspace of B (constraint preconditioner), solving
//   min 0.5 d^T H d + g^T d   s.t.  B d = -c_res.
Vec newton_direction_iterative(const ConstrainedProblem& problem, const Vec& theta,
                               const Vec& grad, const Vec& c_res,
                               double lin_tol) {
  const int n = problem.dim();
  const int l = problem.constraint_dim();

  Vec d0(n, 0.0);
  if (l > 0 && norm(c_res) > 0.0) {
    Vec w = gram_solve(problem, c_res, lin_tol);
    d0 = problem.constraint_apply_transpose(w);
    for (double& x : d0) x = -x;
  }

  auto project = [&](const Vec& v) {
    return l > 0 ? apply_projection(problem, v, lin_tol) : v;
  };

  for (double sigma : {0.0, 1e-8, 1e-4, 1e-2, 1.0, 1e2}) {
    Vec rhs = problem.hessian_vec(theta, d0);
    if (sigma > 0.0) axpy(sigma, d0, rhs);
    axpy(1.0, grad, rhs);
    for (double& x : rhs) x = -x;

    Vec x(n, 0.0);
    Vec r = project(rhs);
    Vec p = r;
    double rr = dot(r, r);
    const double rr0 = rr;
    const double tol2 = std::max(1e-20 * rr0, 1e-28);
    const int cap = 5 * n + 100;
    bool indefinite = false;
    for (int it = 0; it < cap && rr > tol2; ++it) {
      Vec hp = problem.hessian_vec(theta, p);
      if (sigma > 0.0) axpy(sigma, p, hp);
      const double php = dot(p, hp);
      if (php <= 1e-14 * dot(p, p)) {
        indefinite = true;
        break;
      }
      const double alpha = rr / php;
      axpy(alpha, p, x);
      Vec ghp = project(hp);
      axpy(-alpha, ghp, r);
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    if (indefinite) continue;  // retry with a Levenberg shift
    axpy(1.0, x, d0);
    return d0;
  }
  throw SingularSystem("projected CG failed on an indefinite Hessian");
}

}  // namespace

KKTPoint newton_kkt(const ConstrainedProblem& problem,
                    const OptimizerConfig& config) {
  const double lin_tol = config.linear_tolerance;
  const int n = problem.dim();
  const int l = problem.constraint_dim();
  const int cap = newton_cap(config);

  Vec theta = problem.initial_point();
  if (!problem.interior(theta))
    throw DomainViolation("newton_kkt requires an interior initial point");
  Vec grad = problem.gradient(theta);
  const double tol_eff = config.kkt_tolerance * (1.0 + norm(grad));

  Vec lambda = least_squares_multipliers(problem, grad, lin_tol);
  ResidualParts res = residual_parts(problem, theta, grad, lambda);
  std::vector<double> trace{res.total()};
  double max_drift = res.feasibility;

  int it = 0;
  for (; it < cap && res.total() > tol_eff; ++it) {
    Vec c_res = constraint_residual_vec(problem, theta);
    Vec step = (n + l < 2000)
                   ? newton_direction_dense(problem, theta, grad, c_res)
                   : newton_direction_iterative(problem, theta, grad, c_res,
                                                lin_tol);

    double alpha = problem.max_step_fraction(theta, step, config.damping);
    bool accepted = false;
    Vec cand(n);
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (int i = 0; i < n; ++i) cand[i] = theta[i] + alpha * step[i];
      if (problem.interior(cand)) {
        Vec cand_grad = problem.gradient(cand);
        Vec cand_lambda = least_squares_multipliers(problem, cand_grad, lin_tol);
        ResidualParts cand_res =
            residual_parts(problem, cand, cand_grad, cand_lambda);
        if (cand_res.total() < res.total() || cand_res.total() <= tol_eff) {
          theta = cand;
          grad = std::move(cand_grad);
          lambda = std::move(cand_lambda);
          res = cand_res;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw NoConvergence("newton_kkt: damped step could not reduce the KKT residual",
                          res.total(), it);
    trace.push_back(res.total());
    max_drift = std::max(max_drift, res.feasibility);
  }

  const bool converged = res.total() <= tol_eff;
  if (l > 0) {
    const double b_scale = 1.0 + norm(problem.constraint_rhs());
    restore_feasibility(problem, theta, 1e-14 * b_scale);
    grad = problem.gradient(theta);
    lambda = least_squares_multipliers(problem, grad, lin_tol);
    res = residual_parts(problem, theta, grad, lambda);
  }

  KKTPoint out;
  out.theta = std::move(theta);
  out.multipliers = std::move(lambda);
  out.kkt_residual = res.total();
  out.iterations = it;
  out.r_trace = std::move(trace);
  out.max_constraint_violation = max_drift;
  out.converged = converged;
  out.tolerance_used = tol_eff;
  return out;
}

KKTPoint minimize(const ConstrainedProblem& problem,
                  const OptimizerConfig& config) {
  switch (config.method) {
    case OptimMethod::ProjectedGD: return projected_gradient(problem, config);
    case OptimMethod::AEPG: return aepg(problem, config);
    case OptimMethod::NewtonKKT: return newton_kkt(problem, config);
  }
  throw Error("unknown optimizer method");
}

}  // namespace onsager
