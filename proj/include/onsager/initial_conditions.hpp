#ifndef ONSAGER_INITIAL_CONDITIONS_HPP
#define ONSAGER_INITIAL_CONDITIONS_HPP

#include <string>

#include <json.hpp>

#include "onsager/models.hpp"

namespace onsager {

/// Samples a named analytic initial state at cell centers and checks it
/// against the model's invariants. Known names: uniform, pnp_paper_example1,
/// gaussian_bump, two_region_saturation, ms_three_species_smoke.
SystemState builtin_initial_condition(const std::string& name,
                                      const nlohmann::json& params,
                                      const PeriodicGrid& grid,
                                      const ModelSpec& model);

}  // namespace onsager

#endif
