#include "onsager/config.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <vector>

namespace onsager {

namespace {

using nlohmann::json;

std::string joined(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw ParseError("unknown key '" + joined(path, item.key()) + "'",
                       joined(path, item.key()));
  }
}

const json& require_object(const json& obj, const std::string& path) {
  if (!obj.is_object())
    throw ParseError("'" + path + "' must be an object", path);
  return obj;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number())
    throw ParseError("'" + path + "' must be a number", path);
  return v.get<double>();
}

int as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer())
    throw ParseError("'" + path + "' must be an integer", path);
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string())
    throw ParseError("'" + path + "' must be a string", path);
  return v.get<std::string>();
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
  if (!v.is_array())
    throw ParseError("'" + path + "' must be an array of numbers", path);
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// Row-major s x s matrix given as an array of rows.
std::vector<double> as_matrix(const json& v, int s, const std::string& path,
                              std::vector<std::string>& violations) {
  if (!v.is_array())
    throw ParseError("'" + path + "' must be an array of rows", path);
  std::vector<double> out;
  if (static_cast<int>(v.size()) != s) {
    violations.push_back(path + " must have " + std::to_string(s) + " rows");
    return std::vector<double>(static_cast<size_t>(s) * s, 0.0);
  }
  for (int i = 0; i < s; ++i) {
    std::vector<double> row =
        as_number_list(v[i], path + "[" + std::to_string(i) + "]");
    if (static_cast<int>(row.size()) != s) {
      violations.push_back(path + " rows must have " + std::to_string(s) +
                           " entries");
      return std::vector<double>(static_cast<size_t>(s) * s, 0.0);
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

void check_profile(const json& p, const std::string& path, int dim,
                   std::vector<std::string>& violations) {
  require_object(p, path);
  if (!p.contains("profile")) {
    violations.push_back(path + ".profile is required");
    return;
  }
  const std::string kind = as_string(p.at("profile"), path + ".profile");
  if (kind == "zero") {
    check_keys(p, path, {"profile"});
  } else if (kind == "uniform") {
    check_keys(p, path, {"profile", "value"});
    if (!p.contains("value"))
      violations.push_back(path + ".value is required");
    else
      as_number(p.at("value"), path + ".value");
  } else if (kind == "cosine") {
    check_keys(p, path, {"profile", "amplitude"});
    if (!p.contains("amplitude"))
      violations.push_back(path + ".amplitude is required");
    else
      as_number(p.at("amplitude"), path + ".amplitude");
  } else if (kind == "two_region") {
    check_keys(p, path, {"profile", "inside", "outside", "box"});
    for (const char* k : {"inside", "outside"}) {
      if (!p.contains(k))
        violations.push_back(path + "." + k + " is required");
      else
        as_number(p.at(k), path + "." + k);
    }
    if (!p.contains("box")) {
      violations.push_back(path + ".box is required");
    } else {
      std::vector<double> box = as_number_list(p.at("box"), path + ".box");
      if (static_cast<int>(box.size()) != 2 * dim)
        violations.push_back(path + ".box must have " + std::to_string(2 * dim) +
                             " fractional bounds");
      for (double b : box)
        if (b < 0.0 || b > 1.0)
          violations.push_back(path + ".box entries must lie in [0,1]");
    }
  } else {
    violations.push_back(path + ".profile '" + kind + "' is not one of "
                         "zero/uniform/cosine/two_region");
  }
}

json resolved_profile(const json& p) {
  return p;  // profiles carry no implicit defaults
}

}  // namespace

CellField make_profile_field(const json& profile, const PeriodicGrid& grid) {
  const std::string kind = profile.at("profile").get<std::string>();
  CellField out(grid);
  if (kind == "zero") return out;
  if (kind == "uniform") {
    const double v = profile.at("value").get<double>();
    for (double& x : out.values) x = v;
    return out;
  }
  if (kind == "cosine") {
    const double a = profile.at("amplitude").get<double>();
    const int n = grid.n;
    if (grid.dim == 1) {
      for (int j = 0; j < n; ++j)
        out[j] = a * std::cos(2.0 * M_PI * grid.center(j) / grid.side);
    } else {
      for (int ix = 0; ix < n; ++ix) {
        const double v = a * std::cos(2.0 * M_PI * grid.center(ix) / grid.side);
        for (int iy = 0; iy < n; ++iy) out[grid.cell_index(ix, iy)] = v;
      }
    }
    return out;
  }
  if (kind == "two_region") {
    const double inside = profile.at("inside").get<double>();
    const double outside = profile.at("outside").get<double>();
    std::vector<double> box = profile.at("box").get<std::vector<double>>();
    const int n = grid.n;
    auto in_range = [](double f, double lo, double hi) {
      return f >= lo && f < hi;
    };
    if (grid.dim == 1) {
      for (int j = 0; j < n; ++j) {
        const double f = grid.center(j) / grid.side;
        out[j] = in_range(f, box[0], box[1]) ? inside : outside;
      }
    } else {
      for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
          const double fx = grid.center(ix) / grid.side;
          const double fy = grid.center(iy) / grid.side;
          out[grid.cell_index(ix, iy)] =
              in_range(fx, box[0], box[1]) && in_range(fy, box[2], box[3])
                  ? inside
                  : outside;
        }
    }
    return out;
  }
  throw UnknownProfile("field profile '" + kind + "' is not known");
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), "");
  }
  return parse_config_json(doc);
}

RunConfig parse_config_json(const json& doc) {
  require_object(doc, "");
  check_keys(doc, "",
             {"model", "grid", "time", "solver", "initial", "output", "notes"});

  std::vector<std::string> violations;
  for (const char* block : {"model", "grid", "time", "initial"})
    if (!doc.contains(block))
      violations.push_back(std::string(block) + " block is required");

  // ---- grid ----
  int dim = 1, n = 0;
  double side = 1.0;
  if (doc.contains("grid")) {
    const json& g = require_object(doc.at("grid"), "grid");
    check_keys(g, "grid", {"dim", "n", "side_length"});
    if (g.contains("dim")) dim = as_integer(g.at("dim"), "grid.dim");
    if (g.contains("n"))
      n = as_integer(g.at("n"), "grid.n");
    else
      violations.push_back("grid.n is required");
    if (g.contains("side_length"))
      side = as_number(g.at("side_length"), "grid.side_length");
    if (dim != 1 && dim != 2) violations.push_back("grid.dim must be 1 or 2");
    if (n < 2) violations.push_back("grid.n must be >= 2");
    if (!(side > 0.0)) violations.push_back("grid.side_length must be > 0");
  }

  // ---- time ----
  double tau = 0.0;
  int steps = 0, snapshot_every = 0;
  if (doc.contains("time")) {
    const json& t = require_object(doc.at("time"), "time");
    check_keys(t, "time", {"tau", "steps", "snapshot_every"});
    if (t.contains("tau"))
      tau = as_number(t.at("tau"), "time.tau");
    else
      violations.push_back("time.tau is required");
    if (t.contains("steps"))
      steps = as_integer(t.at("steps"), "time.steps");
    else
      violations.push_back("time.steps is required");
    if (t.contains("snapshot_every"))
      snapshot_every = as_integer(t.at("snapshot_every"), "time.snapshot_every");
    if (!(tau > 0.0)) violations.push_back("time.tau must be > 0");
    if (steps < 1) violations.push_back("time.steps must be >= 1");
    if (snapshot_every < 0)
      violations.push_back("time.snapshot_every must be >= 0");
  }

  // ---- solver ----
  OptimizerConfig solver;
  std::string method_name = "newton_kkt";
  if (doc.contains("solver")) {
    const json& s = require_object(doc.at("solver"), "solver");
    check_keys(s, "solver",
               {"method", "eta", "aepg_shift", "max_iterations", "kkt_tolerance",
                "linear_tolerance", "damping"});
    if (s.contains("method")) method_name = as_string(s.at("method"), "solver.method");
    if (s.contains("eta")) solver.eta = as_number(s.at("eta"), "solver.eta");
    if (s.contains("aepg_shift"))
      solver.aepg_shift = as_number(s.at("aepg_shift"), "solver.aepg_shift");
    if (s.contains("max_iterations"))
      solver.max_iterations =
          as_integer(s.at("max_iterations"), "solver.max_iterations");
    if (s.contains("kkt_tolerance"))
      solver.kkt_tolerance = as_number(s.at("kkt_tolerance"), "solver.kkt_tolerance");
    if (s.contains("linear_tolerance"))
      solver.linear_tolerance =
          as_number(s.at("linear_tolerance"), "solver.linear_tolerance");
    if (s.contains("damping"))
      solver.damping = as_number(s.at("damping"), "solver.damping");
  }
  if (method_name == "projected_gd") solver.method = OptimMethod::ProjectedGD;
  else if (method_name == "aepg") solver.method = OptimMethod::AEPG;
  else if (method_name == "newton_kkt") solver.method = OptimMethod::NewtonKKT;
  else violations.push_back("solver.method must be projected_gd, aepg, or newton_kkt");
  if (!(solver.eta > 0.0)) violations.push_back("solver.eta must be > 0");
  if (solver.max_iterations < 0)
    violations.push_back("solver.max_iterations must be >= 0");
  if (!(solver.kkt_tolerance > 0.0))
    violations.push_back("solver.kkt_tolerance must be > 0");
  if (!(solver.linear_tolerance > 0.0))
    violations.push_back("solver.linear_tolerance must be > 0");
  if (!(solver.damping > 0.0 && solver.damping < 1.0))
    violations.push_back("solver.damping must lie in (0,1)");

  // ---- model (structural + scalar checks; fields built after) ----
  std::string model_type;
  json model_block = json::object();
  if (doc.contains("model")) {
    const json& m = require_object(doc.at("model"), "model");
    if (!m.contains("type")) {
      violations.push_back("model.type is required");
    } else {
      model_type = as_string(m.at("type"), "model.type");
    }
    model_block = m;
    if (model_type == "allen_cahn") {
      check_keys(m, "model", {"type", "alpha", "xi0", "well_scale"});
      if (!m.contains("alpha")) violations.push_back("model.alpha is required");
      else if (!(as_number(m.at("alpha"), "model.alpha") > 0.0))
        violations.push_back("model.alpha must be > 0");
      if (m.contains("xi0") && !(as_number(m.at("xi0"), "model.xi0") > 0.0))
        violations.push_back("model.xi0 must be > 0");
      if (m.contains("well_scale")) as_number(m.at("well_scale"), "model.well_scale");
    } else if (model_type == "cahn_hilliard") {
      check_keys(m, "model", {"type", "alpha", "mobility"});
      if (!m.contains("alpha")) violations.push_back("model.alpha is required");
      else if (!(as_number(m.at("alpha"), "model.alpha") > 0.0))
        violations.push_back("model.alpha must be > 0");
      if (m.contains("mobility") &&
          !(as_number(m.at("mobility"), "model.mobility") > 0.0))
        violations.push_back("model.mobility must be > 0");
    } else if (model_type == "fokker_planck") {
      check_keys(m, "model", {"type", "beta", "potential", "dissipation_mode"});
      if (!m.contains("beta")) violations.push_back("model.beta is required");
      else if (!(as_number(m.at("beta"), "model.beta") > 0.0))
        violations.push_back("model.beta must be > 0");
      if (m.contains("potential"))
        check_profile(m.at("potential"), "model.potential", dim, violations);
      if (m.contains("dissipation_mode")) {
        const std::string mode =
            as_string(m.at("dissipation_mode"), "model.dissipation_mode");
        if (mode != "frozen" && mode != "joint")
          violations.push_back("model.dissipation_mode must be frozen or joint");
        else if (mode == "joint" && dim != 1)
          violations.push_back("model.dissipation_mode joint is 1D only");
      }
    } else if (model_type == "pnp") {
      check_keys(m, "model",
                 {"type", "species", "charges", "diffusivities", "permittivity",
                  "fixed_charge"});
      int species = 2;
      if (m.contains("species")) species = as_integer(m.at("species"), "model.species");
      if (species < 1) violations.push_back("model.species must be >= 1");
      if (m.contains("charges") &&
          static_cast<int>(as_number_list(m.at("charges"), "model.charges").size()) !=
              species)
        violations.push_back("model.charges must list one charge per species");
      if (m.contains("diffusivities")) {
        std::vector<double> d =
            as_number_list(m.at("diffusivities"), "model.diffusivities");
        if (static_cast<int>(d.size()) != species)
          violations.push_back("model.diffusivities must list one value per species");
        for (double x : d)
          if (!(x > 0.0)) violations.push_back("model.diffusivities must be > 0");
      }
      if (m.contains("permittivity") &&
          !(as_number(m.at("permittivity"), "model.permittivity") > 0.0))
        violations.push_back("model.permittivity must be > 0");
      if (m.contains("fixed_charge"))
        check_profile(m.at("fixed_charge"), "model.fixed_charge", dim, violations);
    } else if (model_type == "maxwell_stefan") {
      check_keys(m, "model", {"type", "species", "friction"});
      int species = 0;
      if (!m.contains("species")) violations.push_back("model.species is required");
      else species = as_integer(m.at("species"), "model.species");
      if (species < 2) violations.push_back("model.species must be >= 2");
      if (!m.contains("friction")) violations.push_back("model.friction is required");
      else if (species >= 2) {
        std::vector<double> b =
            as_matrix(m.at("friction"), species, "model.friction", violations);
        for (int i = 0; i < species; ++i)
          for (int j = 0; j < species; ++j) {
            if (std::abs(b[i * species + j] - b[j * species + i]) > 1e-14)
              violations.push_back("model.friction must be symmetric");
            if (i != j && b[i * species + j] < 0.0)
              violations.push_back(
                  "model.friction off-diagonals must be >= 0");
          }
      }
    } else if (model_type == "porous_media") {
      check_keys(m, "model",
                 {"type", "phases", "porosity", "sigma", "quad", "lin",
                  "viscosities", "rel_perm_exponent", "permeability", "notes"});
      int phases = 2;
      if (m.contains("phases")) phases = as_integer(m.at("phases"), "model.phases");
      if (phases < 2) violations.push_back("model.phases must be >= 2");
      for (const char* k : {"porosity", "permeability"}) {
        if (!m.contains(k))
          violations.push_back(std::string("model.") + k + " is required");
        else
          check_profile(m.at(k), std::string("model.") + k, dim, violations);
      }
      if (!m.contains("sigma")) violations.push_back("model.sigma is required");
      else {
        std::vector<double> s = as_number_list(m.at("sigma"), "model.sigma");
        if (static_cast<int>(s.size()) != phases)
          violations.push_back("model.sigma must list one value per phase");
        for (double x : s)
          if (!(x > 0.0)) violations.push_back("model.sigma must be > 0");
      }
      if (m.contains("quad")) as_matrix(m.at("quad"), phases, "model.quad", violations);
      if (m.contains("lin") &&
          static_cast<int>(as_number_list(m.at("lin"), "model.lin").size()) != phases)
        violations.push_back("model.lin must list one value per phase");
      if (!m.contains("viscosities"))
        violations.push_back("model.viscosities is required");
      else {
        std::vector<double> e =
            as_number_list(m.at("viscosities"), "model.viscosities");
        if (static_cast<int>(e.size()) != phases)
          violations.push_back("model.viscosities must list one value per phase");
        for (double x : e)
          if (!(x > 0.0)) violations.push_back("model.viscosities must be > 0");
      }
      if (m.contains("rel_perm_exponent") &&
          as_integer(m.at("rel_perm_exponent"), "model.rel_perm_exponent") < 1)
        violations.push_back("model.rel_perm_exponent must be >= 1");
    } else if (!model_type.empty()) {
      violations.push_back("model.type '" + model_type + "' is not known");
    }
  }

  // ---- initial ----
  json initial = json::object();
  if (doc.contains("initial")) {
    const json& ic = require_object(doc.at("initial"), "initial");
    check_keys(ic, "initial", {"name", "params", "file"});
    const bool has_name = ic.contains("name");
    const bool has_file = ic.contains("file");
    if (has_name == has_file)
      violations.push_back("initial must have exactly one of name or file");
    if (has_name) {
      const std::string name = as_string(ic.at("name"), "initial.name");
      static const std::set<std::string> known = {
          "pnp_paper_example1", "uniform", "gaussian_bump",
          "two_region_saturation", "ms_three_species_smoke"};
      if (!known.count(name))
        violations.push_back("initial.name '" + name + "' is not a known profile");
      if (ic.contains("params")) require_object(ic.at("params"), "initial.params");
    }
    if (has_file) {
      const std::string file = as_string(ic.at("file"), "initial.file");
      if (!std::filesystem::exists(file))
        violations.push_back("initial.file '" + file + "' does not exist");
    }
    initial = ic;
    if (has_name && !initial.contains("params")) initial["params"] = json::object();
  }

  // ---- output ----
  std::string out_dir = "out";
  std::string label = "run";
  if (doc.contains("output")) {
    const json& o = require_object(doc.at("output"), "output");
    check_keys(o, "output", {"directory", "label"});
    if (o.contains("directory")) out_dir = as_string(o.at("directory"), "output.directory");
    if (o.contains("label")) label = as_string(o.at("label"), "output.label");
  }

  if (!violations.empty()) throw ValidationError(violations);

  RunConfig cfg;
  cfg.grid = PeriodicGrid::make(dim, n, side);
  cfg.tau = tau;
  cfg.steps = steps;
  cfg.snapshot_every = snapshot_every;
  cfg.solver = solver;
  cfg.initial = initial;
  cfg.output_directory = out_dir;
  cfg.label = label;

  // Build the model with fields sampled on the grid.
  json resolved_model = json::object();
  resolved_model["type"] = model_type;
  if (model_type == "allen_cahn") {
    AllenCahnSpec m;
    m.alpha = model_block.at("alpha").get<double>();
    m.xi0 = model_block.value("xi0", 1.0);
    m.well_scale = model_block.value("well_scale", 1.0);
    resolved_model["alpha"] = m.alpha;
    resolved_model["xi0"] = m.xi0;
    resolved_model["well_scale"] = m.well_scale;
    cfg.model = m;
  } else if (model_type == "cahn_hilliard") {
    CahnHilliardSpec m;
    m.alpha = model_block.at("alpha").get<double>();
    m.mobility = model_block.value("mobility", 1.0);
    resolved_model["alpha"] = m.alpha;
    resolved_model["mobility"] = m.mobility;
    cfg.model = m;
  } else if (model_type == "fokker_planck") {
    FokkerPlanckSpec m;
    m.beta = model_block.at("beta").get<double>();
    json pot = model_block.value("potential", json({{"profile", "zero"}}));
    m.potential = make_profile_field(pot, cfg.grid);
    const std::string mode = model_block.value("dissipation_mode", "frozen");
    m.mode = mode == "joint" ? FokkerPlanckDissipation::Joint
                             : FokkerPlanckDissipation::Frozen;
    resolved_model["beta"] = m.beta;
    resolved_model["potential"] = resolved_profile(pot);
    resolved_model["dissipation_mode"] = mode;
    cfg.model = m;
  } else if (model_type == "pnp") {
    PnpSpec m;
    m.species = model_block.value("species", 2);
    if (model_block.contains("charges"))
      m.charge = model_block.at("charges").get<std::vector<double>>();
    else if (m.species == 2)
      m.charge = {1.0, -1.0};
    else
      m.charge.assign(m.species, 0.0);
    if (model_block.contains("diffusivities"))
      m.diffusivity = model_block.at("diffusivities").get<std::vector<double>>();
    else
      m.diffusivity.assign(m.species, 1.0);
    m.permittivity = model_block.value("permittivity", 1.0);
    json fc = model_block.value("fixed_charge", json({{"profile", "zero"}}));
    m.fixed_charge = make_profile_field(fc, cfg.grid);
    resolved_model["species"] = m.species;
    resolved_model["charges"] = m.charge;
    resolved_model["diffusivities"] = m.diffusivity;
    resolved_model["permittivity"] = m.permittivity;
    resolved_model["fixed_charge"] = resolved_profile(fc);
    cfg.model = m;
  } else if (model_type == "maxwell_stefan") {
    MaxwellStefanSpec m;
    m.species = model_block.at("species").get<int>();
    m.friction.clear();
    for (const auto& row : model_block.at("friction"))
      for (const auto& x : row) m.friction.push_back(x.get<double>());
    resolved_model["species"] = m.species;
    resolved_model["friction"] = model_block.at("friction");
    cfg.model = m;
  } else {  // porous_media
    PorousMediaSpec m;
    m.phases = model_block.value("phases", 2);
    m.porosity = make_profile_field(model_block.at("porosity"), cfg.grid);
    m.permeability = make_profile_field(model_block.at("permeability"), cfg.grid);
    m.sigma = model_block.at("sigma").get<std::vector<double>>();
    if (model_block.contains("quad")) {
      m.quad.clear();
      for (const auto& row : model_block.at("quad"))
        for (const auto& x : row) m.quad.push_back(x.get<double>());
    } else {
      m.quad.assign(static_cast<size_t>(m.phases) * m.phases, 0.0);
    }
    if (model_block.contains("lin"))
      m.lin = model_block.at("lin").get<std::vector<double>>();
    else
      m.lin.assign(m.phases, 0.0);
    m.viscosity = model_block.at("viscosities").get<std::vector<double>>();
    m.rel_perm_exponent = model_block.value("rel_perm_exponent", 3);
    resolved_model["phases"] = m.phases;
    resolved_model["porosity"] = resolved_profile(model_block.at("porosity"));
    resolved_model["permeability"] =
        resolved_profile(model_block.at("permeability"));
    resolved_model["sigma"] = m.sigma;
    json quad_rows = json::array();
    for (int i = 0; i < m.phases; ++i) {
      json row = json::array();
      for (int j = 0; j < m.phases; ++j) row.push_back(m.quad[i * m.phases + j]);
      quad_rows.push_back(row);
    }
    resolved_model["quad"] = quad_rows;
    resolved_model["lin"] = m.lin;
    resolved_model["viscosities"] = m.viscosity;
    resolved_model["rel_perm_exponent"] = m.rel_perm_exponent;
    if (model_block.contains("notes"))
      resolved_model["notes"] = model_block.at("notes");
    cfg.model = m;
  }

  try {
    validate_model(cfg.model, cfg.grid);
  } catch (const DomainViolation& e) {
    throw ValidationError({std::string("model: ") + e.what()});
  }

  json resolved;
  resolved["model"] = resolved_model;
  resolved["grid"] = {{"dim", dim}, {"n", n}, {"side_length", side}};
  resolved["time"] = {
      {"tau", tau}, {"steps", steps}, {"snapshot_every", snapshot_every}};
  json solver_json = {{"method", method_name},
                      {"eta", solver.eta},
                      {"max_iterations", solver.max_iterations},
                      {"kkt_tolerance", solver.kkt_tolerance},
                      {"linear_tolerance", solver.linear_tolerance},
                      {"damping", solver.damping}};
  if (solver.aepg_shift) solver_json["aepg_shift"] = *solver.aepg_shift;
  resolved["solver"] = solver_json;
  resolved["initial"] = initial;
  resolved["output"] = {{"directory", out_dir}, {"label", label}};
  if (doc.contains("notes")) resolved["notes"] = doc.at("notes");
  cfg.resolved = std::move(resolved);
  return cfg;
}

nlohmann::json describe_models() {
  json out;
  out["allen_cahn"] = {
      {"alpha", "gradient-energy coefficient, required > 0"},
      {"xi0", "friction coefficient, default 1"},
      {"well_scale",
       "double-well scale, default 1; 0 selects the quadratic well u^2/2"}};
  out["cahn_hilliard"] = {{"alpha", "gradient-energy coefficient, required > 0"},
                          {"mobility", "constant scalar mobility, default 1"}};
  out["fokker_planck"] = {
      {"beta", "inverse temperature, required > 0"},
      {"potential", "field profile for U(x), default zero"},
      {"dissipation_mode", "frozen (default) or joint (1D only)"}};
  out["pnp"] = {{"species", "ion species count, default 2"},
                {"charges", "per-species charge, default [1,-1]"},
                {"diffusivities", "per-species diffusivity, default 1"},
                {"permittivity", "default 1"},
                {"fixed_charge", "field profile for f(x), default zero"}};
  out["maxwell_stefan"] = {
      {"species", "component count, required >= 2"},
      {"friction",
       "symmetric matrix b_ij with nonnegative off-diagonals, required"}};
  out["porous_media"] = {
      {"phases", "phase count, default 2"},
      {"porosity", "field profile in (0,1), required"},
      {"permeability", "positive field profile, required"},
      {"sigma", "per-phase log-energy weights, required > 0"},
      {"quad", "symmetric interaction matrix, default 0"},
      {"lin", "per-phase linear energy, default 0"},
      {"viscosities", "per-phase viscosity, required > 0"},
      {"rel_perm_exponent", "relative-permeability exponent, default 3"}};
  out["field_profiles"] = {
      {"zero", "{}"},
      {"uniform", "{value}"},
      {"cosine", "{amplitude}: a cos(2 pi x / side)"},
      {"two_region", "{inside, outside, box: fractional bounds}"}};
  out["initial_conditions"] = {
      {"uniform", "{value} or {values: per component}"},
      {"pnp_paper_example1", "{offset: default 1.02}, 2D two-species"},
      {"gaussian_bump", "{width, center or centers, base, normalize}"},
      {"two_region_saturation", "{inside, outside, box}, 2 phases"},
      {"ms_three_species_smoke", "{amplitude: default 0.1}, 3 species"}};
  return out;
}

}  // namespace onsager
