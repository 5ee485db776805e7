#ifndef ONSAGER_MODELS_HPP
#define ONSAGER_MODELS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "onsager/grid.hpp"

namespace onsager {

// ---------------------------------------------------------------------------
// Model descriptions
// ---------------------------------------------------------------------------

/// Nonconserved phase field. F(u) = well_scale * (1 - u^2)^2 / 4; the
/// degenerate choice well_scale == 0 switches to the quadratic well
/// F(u) = u^2 / 2 used by the linear-solver cross-checks.
struct AllenCahnSpec {
  double alpha = 1.0;       // gradient-energy coefficient
  double xi0 = 1.0;         // interior friction
  double well_scale = 1.0;
};

/// Conserved phase field with constant scalar mobility M = A^{-1}.
struct CahnHilliardSpec {
  double alpha = 1.0;
  double mobility = 1.0;
};

enum class FokkerPlanckDissipation {
  Frozen,  // metric |m|^2 / u^k at the previous state, faces
  Joint,   // |m_hat|^2 / u with the unknown u at cells (1D only)
};

struct FokkerPlanckSpec {
  double beta = 1.0;
  CellField potential;  // external potential U sampled at cell centers
  FokkerPlanckDissipation mode = FokkerPlanckDissipation::Frozen;
};

/// Ion transport coupled to a periodic electrostatic potential.
struct PnpSpec {
  int species = 2;
  std::vector<double> charge;        // z_i
  std::vector<double> diffusivity;   // D_i > 0
  double permittivity = 1.0;         // eps_0
  CellField fixed_charge;            // f(x)
};

/// Multicomponent diffusion with pairwise friction b_ij (s x s, row-major).
/// Only off-diagonal entries enter the dissipation.
struct MaxwellStefanSpec {
  int species = 2;
  std::vector<double> friction;
};

/// Immiscible multi-phase flow in a porous matrix.
/// F(u) = sum_i sigma_i u_i (log u_i - 1) + sum_ij quad_ij u_i u_j
///        + sum_i lin_i u_i, energy density weighted by porosity(x).
/// Phase mobility K_i = u_i^p / eta_i * permeability(x), frozen at u^k.
struct PorousMediaSpec {
  int phases = 2;
  CellField porosity;
  std::vector<double> sigma;
  std::vector<double> quad;  // s x s symmetric, row-major
  std::vector<double> lin;
  std::vector<double> viscosity;
  int rel_perm_exponent = 3;
  CellField permeability;
};

using ModelSpec = std::variant<AllenCahnSpec, CahnHilliardSpec,
                               FokkerPlanckSpec, PnpSpec, MaxwellStefanSpec,
                               PorousMediaSpec>;

/// Per-species cell fields; for PNP the last solved potential may be cached
/// for output purposes (evaluation routines never read it).
struct SystemState {
  std::vector<CellField> components;
  std::optional<CellField> potential;
};

// ---------------------------------------------------------------------------
// Structure queries
// ---------------------------------------------------------------------------

int component_count(const ModelSpec& model);
std::string model_name(const ModelSpec& model);

/// False only for Allen-Cahn (no continuity constraint, no flux unknowns).
bool is_conserved(const ModelSpec& model);

/// Models whose energy contains log terms; states must stay positive.
bool has_positivity_barrier(const ModelSpec& model);

/// Models with the per-cell sum constraint sum_i u_i = 1.
bool has_simplex_constraint(const ModelSpec& model);

/// Throws DomainViolation on any violated parameter invariant.
void validate_model(const ModelSpec& model, const PeriodicGrid& grid);

/// Throws DomainViolation if the state breaks the model's invariants
/// (component count, finiteness, positivity, simplex sum).
void validate_state(const ModelSpec& model, const SystemState& state);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Discrete free energy. Gradient terms are face sums h^d |D_h u|^2; PNP
/// recomputes its electrostatic potential from the state before evaluating.
double energy(const ModelSpec& model, const SystemState& state);

/// Exact gradient of the discrete energy with respect to cell values,
/// divided by h^d, one field per component.
std::vector<CellField> chemical_potential(const ModelSpec& model,
                                          const SystemState& state);

/// Quadratic dissipation metric in the face fluxes m (one per component),
/// with mobilities evaluated at `reference`. Allen-Cahn uses the increment
/// form below instead.
double dissipation(const ModelSpec& model, const SystemState& reference,
                   const std::vector<FaceField>& flux);

/// Nonconserved Allen-Cahn metric, (xi0/2) h^d sum |du|^2 over cells.
double increment_dissipation(const AllenCahnSpec& model, const CellField& du);

/// Mean-zero potential solving -div(eps0 grad phi) = f + sum_i z_i u_i.
CellField solve_electrostatic_potential(const PnpSpec& model,
                                        const SystemState& state);

/// Scalar diagnostic, zero exactly when the state is a discrete steady
/// state of the model's dynamics.
double stationary_residual(const ModelSpec& model, const SystemState& state);

/// Face mobilities entering the dissipation metric (conserved models only):
/// FP: u_hat; PNP: D_i u_hat_i; CH: constant; porous: K_hat_i.
/// Maxwell-Stefan couples species and has no per-species scalar mobility;
/// requesting it throws.
std::vector<FaceField> face_mobility(const ModelSpec& model,
                                     const SystemState& reference);

}  // namespace onsager

#endif
