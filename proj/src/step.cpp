#include "onsager/step.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace onsager {

// ---------------------------------------------------------------------------
// ODE minimizing movement
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd fd_hessian(const OdePotential& potential,
                           const Eigen::VectorXd& y) {
  const int n = static_cast<int>(y.size());
  Eigen::MatrixXd h(n, n);
  const double eps = 1e-6;
  Eigen::VectorXd yp = y, ym = y;
  for (int j = 0; j < n; ++j) {
    yp(j) += eps;
    ym(j) -= eps;
    h.col(j) = (potential.gradient(yp) - potential.gradient(ym)) / (2.0 * eps);
    yp(j) = y(j);
    ym(j) = y(j);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace

Eigen::VectorXd ode_minimizing_movement(const Eigen::MatrixXd& metric,
                                        const OdePotential& potential,
                                        const Eigen::VectorXd& y_k, double tau,
                                        double tolerance) {
  if (!(tau > 0.0)) throw DomainViolation("ode step needs tau > 0");
  const int n = static_cast<int>(y_k.size());
  if (metric.rows() != n || metric.cols() != n)
    throw DomainViolation("metric dimension mismatch");
  if ((metric - metric.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, metric.cwiseAbs().maxCoeff()))
    throw DomainViolation("metric must be symmetric");
  if (Eigen::LLT<Eigen::MatrixXd>(metric).info() != Eigen::Success)
    throw DomainViolation("metric must be positive definite");

  auto objective = [&](const Eigen::VectorXd& y) {
    const Eigen::VectorXd d = y - y_k;
    return potential.value(y) + 0.5 / tau * d.dot(metric * d);
  };
  auto grad = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return potential.gradient(y) + metric * (y - y_k) / tau;
  };

  Eigen::VectorXd y = y_k;
  Eigen::VectorXd g = grad(y);
  double f = objective(y);
  const int cap = 200;
  for (int it = 0; it < cap; ++it) {
    if (g.norm() <= tolerance) return y;
    Eigen::MatrixXd h =
        (potential.hessian ? potential.hessian(y) : fd_hessian(potential, y)) +
        metric / tau;
    Eigen::VectorXd d;
    const double h_scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    bool have_direction = false;
    for (double sigma : {0.0, 1e-10, 1e-6, 1e-2, 1.0}) {
      Eigen::MatrixXd hs = h + sigma * h_scale * Eigen::MatrixXd::Identity(n, n);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hs);
      if (ldlt.info() != Eigen::Success) continue;
      d = ldlt.solve(-g);
      if (d.allFinite() && g.dot(d) < 0.0) {
        have_direction = true;
        break;
      }
    }
    if (!have_direction) d = -g;

    double alpha = 1.0;
    const double slope = g.dot(d);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      Eigen::VectorXd cand = y + alpha * d;
      const double fc = objective(cand);
      if (std::isfinite(fc) && fc <= f + 1e-4 * alpha * slope) {
        y = cand;
        f = fc;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw NoConvergence("ode minimizing movement: line search failed",
                          g.norm(), it);
    g = grad(y);
  }
  if (g.norm() <= tolerance) return y;
  throw NoConvergence("ode minimizing movement hit the iteration cap", g.norm(),
                      cap);
}

// ---------------------------------------------------------------------------
// StepProblem
// ---------------------------------------------------------------------------

StepProblem::StepProblem(ModelSpec model, SystemState previous, double tau,
                         const PeriodicGrid& grid)
    : model_(std::move(model)),
      previous_(std::move(previous)),
      grid_(grid),
      tau_(tau) {
  if (!(tau_ > 0.0)) throw DomainViolation("step needs tau > 0");
  validate_model(model_, grid_);
  validate_state(model_, previous_);
  if (previous_.components.front().grid != grid_)
    throw DomainViolation("previous state grid mismatch");

  species_ = component_count(model_);
  conserved_ = is_conserved(model_);
  barrier_ = has_positivity_barrier(model_);
  simplex_ = has_simplex_constraint(model_);
  const int cells = grid_.cells();
  n_u_ = species_ * cells;
  n_m_ = conserved_ ? species_ * grid_.faces_total() : 0;
  n_constraints_ = conserved_ ? species_ * cells + (simplex_ ? cells : 0) : 0;

  if (const auto* fp = std::get_if<FokkerPlanckSpec>(&model_))
    joint_metric_ = fp->mode == FokkerPlanckDissipation::Joint;

  if (conserved_) {
    if (std::holds_alternative<MaxwellStefanSpec>(model_)) {
      uhat_.reserve(species_);
      for (int i = 0; i < species_; ++i)
        uhat_.push_back(average_to_faces(previous_.components[i]));
    } else if (!joint_metric_) {
      const double vol = grid_.cell_volume();
      std::vector<FaceField> mob = face_mobility(model_, previous_);
      metric_weight_.resize(species_);
      for (int i = 0; i < species_; ++i) {
        metric_weight_[i].resize(mob[i].values.size());
        for (size_t f = 0; f < mob[i].values.size(); ++f) {
          if (!(mob[i].values[f] > 0.0))
            throw DomainViolation("non-positive face mobility at u^k");
          metric_weight_[i][f] = vol / mob[i].values[f];
        }
      }
    }
  }
}

StepProblem build_step(const ModelSpec& model, const SystemState& previous,
                       double tau, const PeriodicGrid& grid) {
  return StepProblem(model, previous, tau, grid);
}

SystemState StepProblem::unpack_state(const std::vector<double>& theta) const {
  const int cells = grid_.cells();
  SystemState out;
  out.components.reserve(species_);
  for (int i = 0; i < species_; ++i) {
    CellField u(grid_);
    std::copy_n(theta.begin() + static_cast<long>(i) * cells, cells,
                u.values.begin());
    out.components.push_back(std::move(u));
  }
  return out;
}

std::vector<FaceField> StepProblem::unpack_flux(
    const std::vector<double>& theta) const {
  std::vector<FaceField> out;
  if (!conserved_) return out;
  const int per_species = grid_.faces_total();
  out.reserve(species_);
  for (int i = 0; i < species_; ++i) {
    FaceField m(grid_);
    std::copy_n(theta.begin() + n_u_ + static_cast<long>(i) * per_species,
                per_species, m.values.begin());
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<double> StepProblem::initial_point() const {
  std::vector<double> theta(static_cast<size_t>(dim()), 0.0);
  const int cells = grid_.cells();
  for (int i = 0; i < species_; ++i)
    std::copy_n(previous_.components[i].values.begin(), cells,
                theta.begin() + static_cast<long>(i) * cells);
  return theta;
}

double StepProblem::dissipation_term(const std::vector<double>& theta) const {
  const double vol = grid_.cell_volume();
  if (!conserved_) {
    const auto& ac = std::get<AllenCahnSpec>(model_);
    double s = 0.0;
    for (int c = 0; c < n_u_; ++c) {
      const double d = theta[c] - previous_.components[0][c];
      s += d * d;
    }
    return 0.5 * ac.xi0 * s * vol / tau_;
  }
  if (joint_metric_) {
    const int n = grid_.n;
    const double* u = theta.data();
    const double* m = theta.data() + n_u_;
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mhat = 0.5 * (m[(j + n - 1) % n] + m[j]);
      if (!(u[j] > 0.0))
        throw DomainViolation("joint metric: non-positive density");
      s += mhat * mhat / u[j];
    }
    return 0.5 * s * vol / tau_;
  }
  if (const auto* ms = std::get_if<MaxwellStefanSpec>(&model_)) {
    const int s = species_;
    const int nf = grid_.faces_total();
    const double* m = theta.data() + n_u_;
    double acc = 0.0;
    for (int f = 0; f < nf; ++f) {
      for (int i = 0; i < s; ++i) {
        const double vi = m[i * nf + f] / uhat_[i][f];
        for (int j = i + 1; j < s; ++j) {
          const double d = vi - m[j * nf + f] / uhat_[j][f];
          acc += 0.5 * ms->friction[i * s + j] * uhat_[i][f] * uhat_[j][f] * d * d;
        }
      }
    }
    return acc * vol / tau_;
  }
  const int nf = grid_.faces_total();
  double acc = 0.0;
  for (int i = 0; i < species_; ++i) {
    const double* m = theta.data() + n_u_ + static_cast<long>(i) * nf;
    for (int f = 0; f < nf; ++f) acc += metric_weight_[i][f] * m[f] * m[f];
  }
  return 0.5 * acc / tau_;
}

double StepProblem::value(const std::vector<double>& theta) const {
  return energy(model_, unpack_state(theta)) + dissipation_term(theta);
}

std::vector<double> StepProblem::gradient(const std::vector<double>& theta) const {
  const double vol = grid_.cell_volume();
  std::vector<double> out(static_cast<size_t>(dim()), 0.0);
  const SystemState state = unpack_state(theta);
  const std::vector<CellField> mu = chemical_potential(model_, state);
  const int cells = grid_.cells();
  for (int i = 0; i < species_; ++i)
    for (int c = 0; c < cells; ++c) out[i * cells + c] = vol * mu[i][c];

  if (!conserved_) {
    const auto& ac = std::get<AllenCahnSpec>(model_);
    for (int c = 0; c < n_u_; ++c)
      out[c] += ac.xi0 / tau_ * vol * (theta[c] - previous_.components[0][c]);
    return out;
  }

  if (joint_metric_) {
    const int n = grid_.n;
    const double* u = theta.data();
    const double* m = theta.data() + n_u_;
    // q_j = mhat_j / u_j with mhat the two-face mean at cell j.
    std::vector<double> q(n);
    for (int j = 0; j < n; ++j) {
      const double mhat = 0.5 * (m[(j + n - 1) % n] + m[j]);
      q[j] = mhat / u[j];
    }
    for (int j = 0; j < n; ++j) out[j] += -0.5 * vol / tau_ * q[j] * q[j];
    for (int f = 0; f < n; ++f)
      out[n_u_ + f] = 0.5 * vol / tau_ * (q[f] + q[(f + 1) % n]);
    return out;
  }

  if (const auto* ms = std::get_if<MaxwellStefanSpec>(&model_)) {
    const int s = species_;
    const int nf = grid_.faces_total();
    const double* m = theta.data() + n_u_;
    for (int f = 0; f < nf; ++f) {
      for (int i = 0; i < s; ++i) {
        const double vi = m[i * nf + f] / uhat_[i][f];
        double force = 0.0;
        for (int j = 0; j < s; ++j) {
          if (j == i) continue;
          force += ms->friction[i * s + j] * uhat_[j][f] *
                   (vi - m[j * nf + f] / uhat_[j][f]);
        }
        out[n_u_ + i * nf + f] = vol / tau_ * force;
      }
    }
    return out;
  }

  const int nf = grid_.faces_total();
  for (int i = 0; i < species_; ++i) {
    const double* m = theta.data() + n_u_ + static_cast<long>(i) * nf;
    double* o = out.data() + n_u_ + static_cast<long>(i) * nf;
    for (int f = 0; f < nf; ++f) o[f] = metric_weight_[i][f] * m[f] / tau_;
  }
  return out;
}

std::vector<double> StepProblem::hessian_vec(const std::vector<double>& theta,
                                             const std::vector<double>& v) const {
  const double vol = grid_.cell_volume();
  const int cells = grid_.cells();
  std::vector<double> out(static_cast<size_t>(dim()), 0.0);

  // Energy block, d^2 E in the cell values.
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AllenCahnSpec> ||
                      std::is_same_v<T, CahnHilliardSpec>) {
          const double ws = std::is_same_v<T, AllenCahnSpec>
                                ? std::get<AllenCahnSpec>(model_).well_scale
                                : 1.0;
          CellField vu(grid_);
          std::copy_n(v.begin(), cells, vu.values.begin());
          CellField lap = negative_laplacian(vu);
          for (int c = 0; c < cells; ++c) {
            const double u = theta[c];
            const double fpp = ws == 0.0 ? 1.0 : ws * (3.0 * u * u - 1.0);
            out[c] = vol * (m.alpha * lap[c] + fpp * vu[c]);
          }
        } else if constexpr (std::is_same_v<T, FokkerPlanckSpec>) {
          for (int c = 0; c < cells; ++c)
            out[c] = vol * v[c] / (m.beta * theta[c]);
        } else if constexpr (std::is_same_v<T, PnpSpec>) {
          CellField zv(grid_);
          for (int i = 0; i < species_; ++i)
            for (int c = 0; c < cells; ++c)
              zv[c] += m.charge[i] * v[i * cells + c];
          const double mean = mean_value(zv);
          for (double& x : zv.values) x -= mean;
          const CellField phi_v = solve_periodic_poisson(zv, m.permittivity);
          for (int i = 0; i < species_; ++i)
            for (int c = 0; c < cells; ++c)
              out[i * cells + c] =
                  vol * (v[i * cells + c] / theta[i * cells + c] +
                         m.charge[i] * phi_v[c]);
        } else if constexpr (std::is_same_v<T, MaxwellStefanSpec>) {
          for (int i = 0; i < species_; ++i)
            for (int c = 0; c < cells; ++c)
              out[i * cells + c] = vol * v[i * cells + c] / theta[i * cells + c];
        } else {  // PorousMediaSpec
          const int s = m.phases;
          for (int c = 0; c < cells; ++c) {
            for (int i = 0; i < s; ++i) {
              double acc = m.sigma[i] * v[i * cells + c] / theta[i * cells + c];
              for (int j = 0; j < s; ++j)
                acc += 2.0 * m.quad[i * s + j] * v[j * cells + c];
              out[i * cells + c] = vol * m.porosity[c] * acc;
            }
          }
        }
      },
      model_);

  if (!conserved_) {
    const auto& ac = std::get<AllenCahnSpec>(model_);
    for (int c = 0; c < n_u_; ++c) out[c] += ac.xi0 / tau_ * vol * v[c];
    return out;
  }

  if (joint_metric_) {
    const int n = grid_.n;
    const double* u = theta.data();
    const double* m = theta.data() + n_u_;
    const double* vu = v.data();
    const double* vm = v.data() + n_u_;
    std::vector<double> q(n), dq(n);
    for (int j = 0; j < n; ++j) {
      const double mhat = 0.5 * (m[(j + n - 1) % n] + m[j]);
      const double dmhat = 0.5 * (vm[(j + n - 1) % n] + vm[j]);
      q[j] = mhat / u[j];
      dq[j] = dmhat / u[j] - q[j] * vu[j] / u[j];
    }
    for (int j = 0; j < n; ++j) out[j] += -vol / tau_ * q[j] * dq[j];
    for (int f = 0; f < n; ++f)
      out[n_u_ + f] = 0.5 * vol / tau_ * (dq[f] + dq[(f + 1) % n]);
    return out;
  }

  if (const auto* ms = std::get_if<MaxwellStefanSpec>(&model_)) {
    const int s = species_;
    const int nf = grid_.faces_total();
    const double* vm = v.data() + n_u_;
    for (int f = 0; f < nf; ++f) {
      for (int i = 0; i < s; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) {
          if (j == i) continue;
          const double bij = ms->friction[i * s + j];
          acc += bij * uhat_[j][f] / uhat_[i][f] * vm[i * nf + f];
          acc -= bij * vm[j * nf + f];
        }
        out[n_u_ + i * nf + f] = vol / tau_ * acc;
      }
    }
    return out;
  }

  const int nf = grid_.faces_total();
  for (int i = 0; i < species_; ++i) {
    const double* vm = v.data() + n_u_ + static_cast<long>(i) * nf;
    double* o = out.data() + n_u_ + static_cast<long>(i) * nf;
    for (int f = 0; f < nf; ++f) o[f] = metric_weight_[i][f] * vm[f] / tau_;
  }
  return out;
}

std::vector<double> StepProblem::constraint_apply(
    const std::vector<double>& theta) const {
  std::vector<double> out(static_cast<size_t>(n_constraints_), 0.0);
  if (!conserved_) return out;
  const int cells = grid_.cells();
  const int nf = grid_.faces_total();
  for (int i = 0; i < species_; ++i) {
    FaceField m(grid_);
    std::copy_n(theta.begin() + n_u_ + static_cast<long>(i) * nf, nf,
                m.values.begin());
    CellField div = divergence_to_centers(m);
    for (int c = 0; c < cells; ++c) {
      out[i * cells + c] = theta[i * cells + c] + div[c];
      if (simplex_) out[species_ * cells + c] += div[c];
    }
  }
  return out;
}

std::vector<double> StepProblem::constraint_apply_transpose(
    const std::vector<double>& lambda) const {
  std::vector<double> out(static_cast<size_t>(dim()), 0.0);
  if (!conserved_) return out;
  const int cells = grid_.cells();
  const int nf = grid_.faces_total();
  CellField p(grid_);
  if (simplex_)
    std::copy_n(lambda.begin() + static_cast<long>(species_) * cells, cells,
                p.values.begin());
  const FaceField grad_p = simplex_ ? gradient_to_faces(p) : FaceField(grid_);
  for (int i = 0; i < species_; ++i) {
    CellField li(grid_);
    std::copy_n(lambda.begin() + static_cast<long>(i) * cells, cells,
                li.values.begin());
    for (int c = 0; c < cells; ++c) out[i * cells + c] = li[c];
    // (d_h)^T = -D_h on the periodic grid
    FaceField grad_l = gradient_to_faces(li);
    for (int f = 0; f < nf; ++f) {
      double s = -grad_l[f];
      if (simplex_) s -= grad_p[f];
      out[n_u_ + i * nf + f] = s;
    }
  }
  return out;
}

std::vector<double> StepProblem::constraint_rhs() const {
  std::vector<double> out(static_cast<size_t>(n_constraints_), 0.0);
  if (!conserved_) return out;
  const int cells = grid_.cells();
  for (int i = 0; i < species_; ++i)
    std::copy_n(previous_.components[i].values.begin(), cells,
                out.begin() + static_cast<long>(i) * cells);
  return out;
}

bool StepProblem::interior(const std::vector<double>& theta) const {
  if (!barrier_) return true;
  for (int c = 0; c < n_u_; ++c)
    if (!(theta[c] > 0.0)) return false;
  return true;
}

double StepProblem::max_step_fraction(const std::vector<double>& theta,
                                      const std::vector<double>& step,
                                      double damping) const {
  if (!barrier_) return 1.0;
  double alpha = 1.0;
  for (int c = 0; c < n_u_; ++c) {
    if (step[c] < 0.0) {
      const double limit = damping * (-theta[c] / step[c]);
      alpha = std::min(alpha, limit);
    }
  }
  return std::max(alpha, 1e-300);
}

// ---------------------------------------------------------------------------
// advance
// ---------------------------------------------------------------------------

StepResult advance(const StepProblem& problem, const OptimizerConfig& config) {
  const ModelSpec& model = problem.model();
  const double e_before = energy(model, problem.previous());

  KKTPoint point = minimize(problem, config);
  if (!point.converged)
    throw NoConvergence("inner solver hit the iteration cap with KKT residual " +
                            std::to_string(point.kkt_residual) +
                            " above tolerance " +
                            std::to_string(point.tolerance_used),
                        point.kkt_residual, point.iterations);

  SystemState state = problem.unpack_state(point.theta);
  std::vector<FaceField> flux = problem.unpack_flux(point.theta);

  double constraint_res = 0.0;
  if (problem.constraint_dim() > 0) {
    std::vector<double> c = problem.constraint_apply(point.theta);
    std::vector<double> b = problem.constraint_rhs();
    double s = 0.0;
    for (size_t i = 0; i < c.size(); ++i) {
      const double d = c[i] - b[i];
      s += d * d;
    }
    constraint_res = std::sqrt(s);
    if (constraint_res > kConstraintTolerance)
      throw NoConvergence("step constraint residual " +
                              std::to_string(constraint_res) + " too large",
                          point.kkt_residual, point.iterations);
  }

  if (has_positivity_barrier(model)) {
    for (const CellField& u : state.components)
      for (double x : u.values)
        if (!(x > 0.0))
          throw NoConvergence("step lost positivity", point.kkt_residual,
                              point.iterations);
  }
  if (has_simplex_constraint(model)) {
    const int cells = problem.grid().cells();
    for (int c = 0; c < cells; ++c) {
      double sum = 0.0;
      for (const CellField& u : state.components) sum += u[c];
      if (std::abs(sum - 1.0) > 1e-10)
        throw NoConvergence("step broke the simplex constraint",
                            point.kkt_residual, point.iterations);
    }
  }

  const double e_after = energy(model, state);
  double diss = 0.0;
  if (const auto* ac = std::get_if<AllenCahnSpec>(&model)) {
    CellField du(problem.grid());
    for (int c = 0; c < problem.grid().cells(); ++c)
      du[c] = state.components[0][c] - problem.previous().components[0][c];
    diss = increment_dissipation(*ac, du);
  } else {
    const auto* fp = std::get_if<FokkerPlanckSpec>(&model);
    const bool joint = fp && fp->mode == FokkerPlanckDissipation::Joint;
    diss = dissipation(model, joint ? state : problem.previous(), flux);
  }

  if (e_after + diss / problem.tau() >
      e_before + kEnergyInequalitySlack * (1.0 + std::abs(e_before)))
    throw NoConvergence(
        "energy-dissipation inequality violated: the solver returned a "
        "stationary point that is not a minimizer",
        point.kkt_residual, point.iterations);

  if (std::holds_alternative<PnpSpec>(model))
    state.potential =
        solve_electrostatic_potential(std::get<PnpSpec>(model), state);

  StepResult out;
  out.state = std::move(state);
  out.flux = std::move(flux);
  out.energy_before = e_before;
  out.energy_after = e_after;
  out.dissipation_value = diss;
  out.iterations = point.iterations;
  out.constraint_residual = constraint_res;
  out.kkt_residual = point.kkt_residual;
  out.multipliers = std::move(point.multipliers);
  return out;
}

}  // namespace onsager
