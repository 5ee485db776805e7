#include "onsager/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace onsager {

namespace {

double safe_log(double x, const char* where) {
  if (!(x > 0.0))
    throw DomainViolation(std::string(where) + ": log of non-positive value " +
                          std::to_string(x));
  return std::log(x);
}

// F and F' for the phase-field well. well_scale == 0 selects the quadratic
// well u^2/2 used by the linear cross-checks.
double well_value(double well_scale, double u) {
  if (well_scale == 0.0) return 0.5 * u * u;
  const double q = 1.0 - u * u;
  return well_scale * 0.25 * q * q;
}

double well_derivative(double well_scale, double u) {
  if (well_scale == 0.0) return u;
  return well_scale * (u * u * u - u);
}

const PeriodicGrid& state_grid(const SystemState& state) {
  if (state.components.empty())
    throw DomainViolation("state has no components");
  return state.components.front().grid;
}

void check_symmetric(const std::vector<double>& a, int s, const char* what) {
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j)
      if (std::abs(a[i * s + j] - a[j * s + i]) > 1e-14)
        throw DomainViolation(std::string(what) + " matrix is not symmetric");
}

// Phase mobility fields K_i = u_i^p / eta_i * K(x) averaged to faces.
std::vector<FaceField> porous_face_mobility(const PorousMediaSpec& pm,
                                            const SystemState& reference) {
  const PeriodicGrid& g = state_grid(reference);
  std::vector<FaceField> out;
  out.reserve(pm.phases);
  for (int i = 0; i < pm.phases; ++i) {
    CellField ki(g);
    for (int c = 0; c < g.cells(); ++c) {
      const double u = reference.components[i][c];
      double kr = 1.0;
      for (int p = 0; p < pm.rel_perm_exponent; ++p) kr *= u;
      ki[c] = kr / pm.viscosity[i] * pm.permeability[c];
    }
    out.push_back(average_to_faces(ki));
  }
  return out;
}

}  // namespace

int component_count(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PnpSpec>) return m.species;
        else if constexpr (std::is_same_v<T, MaxwellStefanSpec>) return m.species;
        else if constexpr (std::is_same_v<T, PorousMediaSpec>) return m.phases;
        else return 1;
      },
      model);
}

std::string model_name(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AllenCahnSpec>) return "allen_cahn";
        else if constexpr (std::is_same_v<T, CahnHilliardSpec>) return "cahn_hilliard";
        else if constexpr (std::is_same_v<T, FokkerPlanckSpec>) return "fokker_planck";
        else if constexpr (std::is_same_v<T, PnpSpec>) return "pnp";
        else if constexpr (std::is_same_v<T, MaxwellStefanSpec>) return "maxwell_stefan";
        else return "porous_media";
      },
      model);
}

bool is_conserved(const ModelSpec& model) {
  return !std::holds_alternative<AllenCahnSpec>(model);
}

bool has_positivity_barrier(const ModelSpec& model) {
  return std::holds_alternative<FokkerPlanckSpec>(model) ||
         std::holds_alternative<PnpSpec>(model) ||
         std::holds_alternative<MaxwellStefanSpec>(model) ||
         std::holds_alternative<PorousMediaSpec>(model);
}

bool has_simplex_constraint(const ModelSpec& model) {
  return std::holds_alternative<MaxwellStefanSpec>(model) ||
         std::holds_alternative<PorousMediaSpec>(model);
}

void validate_model(const ModelSpec& model, const PeriodicGrid& grid) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AllenCahnSpec>) {
          if (!(m.alpha > 0.0)) throw DomainViolation("allen_cahn: alpha must be > 0");
          if (!(m.xi0 > 0.0)) throw DomainViolation("allen_cahn: xi0 must be > 0");
          if (!std::isfinite(m.well_scale))
            throw DomainViolation("allen_cahn: well_scale must be finite");
        } else if constexpr (std::is_same_v<T, CahnHilliardSpec>) {
          if (!(m.alpha > 0.0)) throw DomainViolation("cahn_hilliard: alpha must be > 0");
          if (!(m.mobility > 0.0))
            throw DomainViolation("cahn_hilliard: mobility must be > 0");
        } else if constexpr (std::is_same_v<T, FokkerPlanckSpec>) {
          if (!(m.beta > 0.0)) throw DomainViolation("fokker_planck: beta must be > 0");
          if (m.potential.grid != grid)
            throw DomainViolation("fokker_planck: potential grid mismatch");
          if (m.mode == FokkerPlanckDissipation::Joint && grid.dim != 1)
            throw DomainViolation("fokker_planck: joint dissipation is 1D only");
        } else if constexpr (std::is_same_v<T, PnpSpec>) {
          if (m.species < 1) throw DomainViolation("pnp: species must be >= 1");
          if (static_cast<int>(m.charge.size()) != m.species)
            throw DomainViolation("pnp: charge list size mismatch");
          if (static_cast<int>(m.diffusivity.size()) != m.species)
            throw DomainViolation("pnp: diffusivity list size mismatch");
          for (double d : m.diffusivity)
            if (!(d > 0.0)) throw DomainViolation("pnp: diffusivities must be > 0");
          if (!(m.permittivity > 0.0))
            throw DomainViolation("pnp: permittivity must be > 0");
          if (m.fixed_charge.grid != grid)
            throw DomainViolation("pnp: fixed charge grid mismatch");
        } else if constexpr (std::is_same_v<T, MaxwellStefanSpec>) {
          if (m.species < 2) throw DomainViolation("maxwell_stefan: species must be >= 2");
          const int s = m.species;
          if (static_cast<int>(m.friction.size()) != s * s)
            throw DomainViolation("maxwell_stefan: friction matrix size mismatch");
          check_symmetric(m.friction, s, "maxwell_stefan friction");
          for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
              if (i != j && m.friction[i * s + j] < 0.0)
                throw DomainViolation(
                    "maxwell_stefan: off-diagonal friction must be >= 0");
        } else if constexpr (std::is_same_v<T, PorousMediaSpec>) {
          const int s = m.phases;
          if (s < 2) throw DomainViolation("porous_media: phases must be >= 2");
          if (m.porosity.grid != grid || m.permeability.grid != grid)
            throw DomainViolation("porous_media: field grid mismatch");
          for (double p : m.porosity.values)
            if (!(p > 0.0 && p < 1.0))
              throw DomainViolation("porous_media: porosity must lie in (0,1)");
          for (double k : m.permeability.values)
            if (!(k > 0.0))
              throw DomainViolation("porous_media: permeability must be > 0");
          if (static_cast<int>(m.sigma.size()) != s)
            throw DomainViolation("porous_media: sigma size mismatch");
          for (double sg : m.sigma)
            if (!(sg > 0.0))
              throw DomainViolation("porous_media: sigma must be > 0");
          if (static_cast<int>(m.quad.size()) != s * s)
            throw DomainViolation("porous_media: quad matrix size mismatch");
          check_symmetric(m.quad, s, "porous_media quad");
          if (static_cast<int>(m.lin.size()) != s)
            throw DomainViolation("porous_media: lin size mismatch");
          if (static_cast<int>(m.viscosity.size()) != s)
            throw DomainViolation("porous_media: viscosity size mismatch");
          for (double e : m.viscosity)
            if (!(e > 0.0))
              throw DomainViolation("porous_media: viscosities must be > 0");
          if (m.rel_perm_exponent < 1)
            throw DomainViolation("porous_media: rel_perm_exponent must be >= 1");
        }
      },
      model);
}

void validate_state(const ModelSpec& model, const SystemState& state) {
  const int s = component_count(model);
  if (static_cast<int>(state.components.size()) != s)
    throw DomainViolation("state has " +
                          std::to_string(state.components.size()) +
                          " components, model needs " + std::to_string(s));
  const PeriodicGrid& g = state_grid(state);
  for (const CellField& u : state.components) {
    if (u.grid != g) throw DomainViolation("state components on mixed grids");
    for (double x : u.values)
      if (!std::isfinite(x))
        throw DomainViolation("state contains a non-finite value");
  }
  if (has_positivity_barrier(model)) {
    for (const CellField& u : state.components)
      for (double x : u.values)
        if (!(x > 0.0))
          throw DomainViolation("state must be strictly positive");
  }
  if (has_simplex_constraint(model)) {
    for (int c = 0; c < g.cells(); ++c) {
      double sum = 0.0;
      for (const CellField& u : state.components) sum += u[c];
      if (std::abs(sum - 1.0) > 1e-10)
        throw DomainViolation("per-cell component sum deviates from 1 by " +
                              std::to_string(sum - 1.0));
    }
  }
}

// ---------------------------------------------------------------------------
// Energy
// ---------------------------------------------------------------------------

namespace {

double gradient_energy(const CellField& u, double alpha) {
  FaceField du = gradient_to_faces(u);
  double s = 0.0;
  for (double x : du.values) s += x * x;
  return 0.5 * alpha * s * u.grid.cell_volume();
}

}  // namespace

double energy(const ModelSpec& model, const SystemState& state) {
  const PeriodicGrid& g = state_grid(state);
  const double vol = g.cell_volume();
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AllenCahnSpec> ||
                      std::is_same_v<T, CahnHilliardSpec>) {
          const CellField& u = state.components[0];
          const double ws =
              std::is_same_v<T, AllenCahnSpec>
                  ? std::get<AllenCahnSpec>(model).well_scale
                  : 1.0;
          double bulk = 0.0;
          for (double x : u.values) bulk += well_value(ws, x);
          return bulk * vol + gradient_energy(u, m.alpha);
        } else if constexpr (std::is_same_v<T, FokkerPlanckSpec>) {
          const CellField& u = state.components[0];
          double s = 0.0;
          for (int c = 0; c < g.cells(); ++c)
            s += u[c] * safe_log(u[c], "fokker_planck energy") / m.beta +
                 u[c] * m.potential[c];
          return s * vol;
        } else if constexpr (std::is_same_v<T, PnpSpec>) {
          double s = 0.0;
          for (int i = 0; i < m.species; ++i)
            for (double x : state.components[i].values)
              s += x * safe_log(x, "pnp energy");
          const CellField phi = solve_electrostatic_potential(m, state);
          FaceField dphi = gradient_to_faces(phi);
          double es = 0.0;
          for (double x : dphi.values) es += x * x;
          return s * vol + 0.5 * m.permittivity * es * vol;
        } else if constexpr (std::is_same_v<T, MaxwellStefanSpec>) {
          double s = 0.0;
          for (int i = 0; i < m.species; ++i)
            for (double x : state.components[i].values)
              s += x * safe_log(x, "maxwell_stefan energy");
          return s * vol;
        } else {  // PorousMediaSpec
          const int np = m.phases;
          double s = 0.0;
          for (int c = 0; c < g.cells(); ++c) {
            double f = 0.0;
            for (int i = 0; i < np; ++i) {
              const double u = state.components[i][c];
              f += m.sigma[i] * u * (safe_log(u, "porous_media energy") - 1.0);
              f += m.lin[i] * u;
              for (int j = 0; j < np; ++j)
                f += m.quad[i * np + j] * u * state.components[j][c];
            }
            s += m.porosity[c] * f;
          }
          return s * vol;
        }
      },
      model);
}

std::vector<CellField> chemical_potential(const ModelSpec& model,
                                          const SystemState& state) {
  const PeriodicGrid& g = state_grid(state);
  return std::visit(
      [&](const auto& m) -> std::vector<CellField> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AllenCahnSpec> ||
                      std::is_same_v<T, CahnHilliardSpec>) {
          const CellField& u = state.components[0];
          const double ws =
              std::is_same_v<T, AllenCahnSpec>
                  ? std::get<AllenCahnSpec>(model).well_scale
                  : 1.0;
          CellField mu = negative_laplacian(u);
          for (int c = 0; c < g.cells(); ++c)
            mu[c] = m.alpha * mu[c] + well_derivative(ws, u[c]);
          return {std::move(mu)};
        } else if constexpr (std::is_same_v<T, FokkerPlanckSpec>) {
          const CellField& u = state.components[0];
          CellField mu(g);
          for (int c = 0; c < g.cells(); ++c)
            mu[c] = (1.0 + safe_log(u[c], "fokker_planck potential")) / m.beta +
                    m.potential[c];
          return {std::move(mu)};
        } else if constexpr (std::is_same_v<T, PnpSpec>) {
          const CellField phi = solve_electrostatic_potential(m, state);
          std::vector<CellField> mu;
          mu.reserve(m.species);
          for (int i = 0; i < m.species; ++i) {
            CellField mi(g);
            for (int c = 0; c < g.cells(); ++c)
              mi[c] = 1.0 + safe_log(state.components[i][c], "pnp potential") +
                      m.charge[i] * phi[c];
            mu.push_back(std::move(mi));
          }
          return mu;
        } else if constexpr (std::is_same_v<T, MaxwellStefanSpec>) {
          std::vector<CellField> mu;
          mu.reserve(m.species);
          for (int i = 0; i < m.species; ++i) {
            CellField mi(g);
            for (int c = 0; c < g.cells(); ++c)
              mi[c] = 1.0 + safe_log(state.components[i][c],
                                     "maxwell_stefan potential");
            mu.push_back(std::move(mi));
          }
          return mu;
        } else {  // PorousMediaSpec
          const int np = m.phases;
          std::vector<CellField> mu;
          mu.reserve(np);
          for (int i = 0; i < np; ++i) {
            CellField mi(g);
            for (int c = 0; c < g.cells(); ++c) {
              double v = m.sigma[i] * safe_log(state.components[i][c],
                                               "porous_media potential") +
                         m.lin[i];
              for (int j = 0; j < np; ++j)
                v += 2.0 * m.quad[i * np + j] * state.components[j][c];
              mi[c] = m.porosity[c] * v;
            }
            mu.push_back(std::move(mi));
          }
          return mu;
        }
      },
      model);
}

// ---------------------------------------------------------------------------
// Dissipation metrics
// ---------------------------------------------------------------------------

double increment_dissipation(const AllenCahnSpec& model, const CellField& du) {
  double s = 0.0;
  for (double x : du.values) s += x * x;
  return 0.5 * model.xi0 * s * du.grid.cell_volume();
}

std::vector<FaceField> face_mobility(const ModelSpec& model,
                                     const SystemState& reference) {
  const PeriodicGrid& g = state_grid(reference);
  return std::visit(
      [&](const auto& m) -> std::vector<FaceField> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AllenCahnSpec>) {
          throw DomainViolation("allen_cahn has no face mobility");
        } else if constexpr (std::is_same_v<T, CahnHilliardSpec>) {
          return {FaceField(g, m.mobility)};
        } else if constexpr (std::is_same_v<T, FokkerPlanckSpec>) {
          return {average_to_faces(reference.components[0])};
        } else if constexpr (std::is_same_v<T, PnpSpec>) {
          std::vector<FaceField> out;
          out.reserve(m.species);
          for (int i = 0; i < m.species; ++i) {
            FaceField f = average_to_faces(reference.components[i]);
            for (double& x : f.values) x *= m.diffusivity[i];
            out.push_back(std::move(f));
          }
          return out;
        } else if constexpr (std::is_same_v<T, MaxwellStefanSpec>) {
          std::vector<FaceField> out;
          out.reserve(m.species);
          for (int i = 0; i < m.species; ++i)
            out.push_back(average_to_faces(reference.components[i]));
          return out;
        } else {
          return porous_face_mobility(m, reference);
        }
      },
      model);
}

double dissipation(const ModelSpec& model, const SystemState& reference,
                   const std::vector<FaceField>& flux) {
  const PeriodicGrid& g = state_grid(reference);
  const double vol = g.cell_volume();
  const int s = component_count(model);
  if (static_cast<int>(flux.size()) != s)
    throw DomainViolation("flux component count mismatch");

  if (const auto* fp = std::get_if<FokkerPlanckSpec>(&model);
      fp && fp->mode == FokkerPlanckDissipation::Joint) {
    // 1D cell-centered variant: |m_hat|^2 / u with m_hat the two-face mean.
    const CellField& u = reference.components[0];
    const FaceField& m = flux[0];
    const int n = g.n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mhat = 0.5 * (m[(j + n - 1) % n] + m[j]);
      if (!(u[j] > 0.0))
        throw DomainViolation("joint dissipation: non-positive density");
      acc += mhat * mhat / u[j];
    }
    return 0.5 * acc * vol;
  }

  if (const auto* ms = std::get_if<MaxwellStefanSpec>(&model)) {
    std::vector<FaceField> uhat;
    uhat.reserve(s);
    for (int i = 0; i < s; ++i) {
      FaceField f = average_to_faces(reference.components[i]);
      for (double x : f.values)
        if (!(x > 0.0))
          throw DomainViolation("maxwell_stefan: non-positive face density");
      uhat.push_back(std::move(f));
    }
    double acc = 0.0;
    const int nf = g.faces_total();
    for (int f = 0; f < nf; ++f) {
      for (int i = 0; i < s; ++i) {
        const double vi = flux[i][f] / uhat[i][f];
        for (int j = i + 1; j < s; ++j) {
          const double d = vi - flux[j][f] / uhat[j][f];
          // symmetric pair counted once, hence 1/2 instead of 1/4
          acc += 0.5 * ms->friction[i * s + j] * uhat[i][f] * uhat[j][f] * d * d;
        }
      }
    }
    return acc * vol;
  }

  // Diagonal metrics: (1/2) h^d sum m^2 / mobility per component and face.
  std::vector<FaceField> mob = face_mobility(model, reference);
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    const int nf = g.faces_total();
    for (int f = 0; f < nf; ++f) {
      if (!(mob[i][f] > 0.0))
        throw DomainViolation("dissipation: non-positive face mobility");
      acc += flux[i][f] * flux[i][f] / mob[i][f];
    }
  }
  return 0.5 * acc * vol;
}

// ---------------------------------------------------------------------------
// Electrostatics
// ---------------------------------------------------------------------------

CellField solve_electrostatic_potential(const PnpSpec& model,
                                        const SystemState& state) {
  const PeriodicGrid& g = state_grid(state);
  CellField rho = model.fixed_charge;
  for (int i = 0; i < model.species; ++i)
    for (int c = 0; c < g.cells(); ++c)
      rho[c] += model.charge[i] * state.components[i][c];
  const double total = integrate_cells(rho);
  if (std::abs(total) > 1e-10)
    throw NonNeutralSource("pnp: total charge " + std::to_string(total) +
                           " is not neutral");
  // Project onto the solvable subspace; the physical check above already
  // bounded the discarded mean.
  const double mean = mean_value(rho);
  for (double& x : rho.values) x -= mean;
  return solve_periodic_poisson(rho, model.permittivity);
}

// ---------------------------------------------------------------------------
// Stationarity diagnostic
// ---------------------------------------------------------------------------

namespace {

double l2h_norm_squared(const CellField& u) {
  double s = 0.0;
  for (double x : u.values) s += x * x;
  return s * u.grid.cell_volume();
}

}  // namespace

double stationary_residual(const ModelSpec& model, const SystemState& state) {
  const PeriodicGrid& g = state_grid(state);
  std::vector<CellField> mu = chemical_potential(model, state);

  if (const auto* ac = std::get_if<AllenCahnSpec>(&model)) {
    double s = l2h_norm_squared(mu[0]);
    return std::sqrt(s) / ac->xi0;
  }

  // Conserved dynamics: || d_h( mobility * D_h(mu_i - mu_bar) ) || summed over
  // species, with mu_bar = 0 except for the pressure-coupled systems where
  // the species-mean potential plays the role of the common pressure.
  const int s = component_count(model);
  CellField mu_bar(g);
  if (has_simplex_constraint(model)) {
    for (int c = 0; c < g.cells(); ++c) {
      double acc = 0.0;
      for (int i = 0; i < s; ++i) acc += mu[i][c];
      mu_bar[c] = acc / s;
    }
  }
  std::vector<FaceField> mob = face_mobility(model, state);
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    CellField w(g);
    for (int c = 0; c < g.cells(); ++c) w[c] = mu[i][c] - mu_bar[c];
    FaceField grad = gradient_to_faces(w);
    for (int f = 0; f < g.faces_total(); ++f) grad[f] *= mob[i][f];
    acc += l2h_norm_squared(divergence_to_centers(grad));
  }
  return std::sqrt(acc);
}

}  // namespace onsager
