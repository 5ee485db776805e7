#ifndef ONSAGER_CONFIG_HPP
#define ONSAGER_CONFIG_HPP

#include <string>

#include <json.hpp>

#include "onsager/models.hpp"
#include "onsager/optim.hpp"

namespace onsager {

/// Fully resolved run description. `resolved` is the config JSON with every
/// default filled in; re-parsing it reproduces this RunConfig exactly.
struct RunConfig {
  PeriodicGrid grid;
  ModelSpec model;
  double tau = 0.0;
  int steps = 0;
  int snapshot_every = 0;
  OptimizerConfig solver;
  nlohmann::json initial;  // {"name":..., "params":{...}} or {"file": "..."}
  std::string output_directory;
  std::string label;
  nlohmann::json resolved;
};

/// Strict-mode parse: unknown keys raise ParseError with the dotted key path;
/// all violated invariants are collected into one ValidationError.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_json(const nlohmann::json& doc);

/// Samples a named analytic field profile at cell centers. Profiles:
/// uniform {value}, cosine {amplitude} (a cos(2 pi x / side)),
/// two_region {inside, outside, box: fractional bounds}.
CellField make_profile_field(const nlohmann::json& profile,
                             const PeriodicGrid& grid);

/// JSON description of every model block and its defaults (for the CLI
/// describe-models command).
nlohmann::json describe_models();

}  // namespace onsager

#endif
