#include "onsager/initial_conditions.hpp"

#include <cmath>
#include <vector>

namespace onsager {

namespace {

using nlohmann::json;

// Minimum-image distance on the periodic interval.
double wrapped_delta(double x, double c, double side) {
  double d = std::fmod(std::abs(x - c), side);
  return std::min(d, side - d);
}

SystemState uniform_state(const json& params, const PeriodicGrid& grid,
                          int species) {
  std::vector<double> values;
  if (params.contains("values")) {
    values = params.at("values").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != species)
      throw DomainViolation("uniform: values list must match component count");
  } else if (params.contains("value")) {
    values.assign(species, params.at("value").get<double>());
  } else {
    throw DomainViolation("uniform: needs value or values");
  }
  SystemState out;
  for (int i = 0; i < species; ++i)
    out.components.emplace_back(grid, values[i]);
  return out;
}

SystemState pnp_paper_example1(const json& params, const PeriodicGrid& grid,
                               int species) {
  if (grid.dim != 2)
    throw DomainViolation("pnp_paper_example1 requires a 2D grid");
  if (species != 2)
    throw DomainViolation("pnp_paper_example1 requires two species");
  const double offset = params.value("offset", 1.02);
  SystemState out;
  CellField u1(grid), u2(grid);
  for (int ix = 0; ix < grid.n; ++ix) {
    const double px = 2.0 * M_PI * grid.center(ix) / grid.side;
    for (int iy = 0; iy < grid.n; ++iy) {
      const double py = 2.0 * M_PI * grid.center(iy) / grid.side;
      const int c = grid.cell_index(ix, iy);
      u1[c] = offset + std::sin(px) * std::cos(px);
      u2[c] = offset + std::sin(py) * std::cos(py);
    }
  }
  out.components.push_back(std::move(u1));
  out.components.push_back(std::move(u2));
  return out;
}

SystemState gaussian_bump(const json& params, const PeriodicGrid& grid,
                          int species) {
  if (!params.contains("width"))
    throw DomainViolation("gaussian_bump: width is required");
  const double width = params.at("width").get<double>();
  if (!(width > 0.0)) throw DomainViolation("gaussian_bump: width must be > 0");
  const double base = params.value("base", 0.0);
  const bool normalize = params.value("normalize", true);

  std::vector<std::vector<double>> centers;
  if (params.contains("centers")) {
    centers = params.at("centers").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(centers.size()) != species)
      throw DomainViolation("gaussian_bump: one center per component needed");
  } else if (params.contains("center")) {
    centers.assign(species, params.at("center").get<std::vector<double>>());
  } else {
    centers.assign(species, std::vector<double>(grid.dim, 0.5 * grid.side));
  }
  for (const auto& c : centers)
    if (static_cast<int>(c.size()) != grid.dim)
      throw DomainViolation("gaussian_bump: center dimension mismatch");

  SystemState out;
  for (int i = 0; i < species; ++i) {
    CellField u(grid);
    if (grid.dim == 1) {
      for (int j = 0; j < grid.n; ++j) {
        const double d = wrapped_delta(grid.center(j), centers[i][0], grid.side);
        u[j] = base + std::exp(-0.5 * d * d / (width * width));
      }
    } else {
      for (int ix = 0; ix < grid.n; ++ix)
        for (int iy = 0; iy < grid.n; ++iy) {
          const double dx =
              wrapped_delta(grid.center(ix), centers[i][0], grid.side);
          const double dy =
              wrapped_delta(grid.center(iy), centers[i][1], grid.side);
          u[grid.cell_index(ix, iy)] =
              base + std::exp(-0.5 * (dx * dx + dy * dy) / (width * width));
        }
    }
    if (normalize) {
      const double mass = integrate_cells(u);
      if (!(mass > 0.0))
        throw DomainViolation("gaussian_bump: non-positive mass");
      for (double& x : u.values) x /= mass;
    }
    out.components.push_back(std::move(u));
  }
  return out;
}

SystemState two_region_saturation(const json& params, const PeriodicGrid& grid,
                                  int species) {
  if (species != 2)
    throw DomainViolation("two_region_saturation requires two phases");
  for (const char* k : {"inside", "outside"})
    if (!params.contains(k))
      throw DomainViolation(std::string("two_region_saturation: ") + k +
                            " is required");
  const double inside = params.at("inside").get<double>();
  const double outside = params.at("outside").get<double>();
  for (double v : {inside, outside})
    if (!(v > 0.0 && v < 1.0))
      throw DomainViolation(
          "two_region_saturation: saturations must lie in (0,1)");
  std::vector<double> box;
  if (params.contains("box"))
    box = params.at("box").get<std::vector<double>>();
  else
    box.assign(grid.dim == 1 ? std::initializer_list<double>{0.25, 0.75}
                             : std::initializer_list<double>{0.25, 0.75, 0.25, 0.75});
  if (static_cast<int>(box.size()) != 2 * grid.dim)
    throw DomainViolation("two_region_saturation: box bounds mismatch");

  SystemState out;
  CellField sw(grid);
  if (grid.dim == 1) {
    for (int j = 0; j < grid.n; ++j) {
      const double f = grid.center(j) / grid.side;
      sw[j] = (f >= box[0] && f < box[1]) ? inside : outside;
    }
  } else {
    for (int ix = 0; ix < grid.n; ++ix)
      for (int iy = 0; iy < grid.n; ++iy) {
        const double fx = grid.center(ix) / grid.side;
        const double fy = grid.center(iy) / grid.side;
        sw[grid.cell_index(ix, iy)] =
            (fx >= box[0] && fx < box[1] && fy >= box[2] && fy < box[3])
                ? inside
                : outside;
      }
  }
  CellField sn(grid);
  for (int c = 0; c < grid.cells(); ++c) sn[c] = 1.0 - sw[c];
  out.components.push_back(std::move(sw));
  out.components.push_back(std::move(sn));
  return out;
}

SystemState ms_three_species_smoke(const json& params, const PeriodicGrid& grid,
                                   int species) {
  if (species != 3)
    throw DomainViolation("ms_three_species_smoke requires three species");
  const double a = params.value("amplitude", 0.1);
  if (!(a >= 0.0 && a < 1.0 / 3.0))
    throw DomainViolation("ms_three_species_smoke: amplitude must lie in [0,1/3)");
  SystemState out;
  CellField u1(grid), u2(grid), u3(grid);
  auto fill = [&](int c, double x) {
    const double s1 = std::sin(2.0 * M_PI * x / grid.side);
    const double s2 = std::sin(4.0 * M_PI * x / grid.side);
    u1[c] = 1.0 / 3.0 + a * s1;
    u2[c] = 1.0 / 3.0 - 0.5 * a * (s1 + s2);
    u3[c] = 1.0 / 3.0 - 0.5 * a * (s1 - s2);
  };
  if (grid.dim == 1) {
    for (int j = 0; j < grid.n; ++j) fill(j, grid.center(j));
  } else {
    for (int ix = 0; ix < grid.n; ++ix)
      for (int iy = 0; iy < grid.n; ++iy)
        fill(grid.cell_index(ix, iy), grid.center(ix));
  }
  out.components.push_back(std::move(u1));
  out.components.push_back(std::move(u2));
  out.components.push_back(std::move(u3));
  return out;
}

}  // namespace

SystemState builtin_initial_condition(const std::string& name,
                                      const json& params_in,
                                      const PeriodicGrid& grid,
                                      const ModelSpec& model) {
  const json params = params_in.is_null() ? json::object() : params_in;
  const int species = component_count(model);
  SystemState out;
  if (name == "uniform") out = uniform_state(params, grid, species);
  else if (name == "pnp_paper_example1") out = pnp_paper_example1(params, grid, species);
  else if (name == "gaussian_bump") out = gaussian_bump(params, grid, species);
  else if (name == "two_region_saturation")
    out = two_region_saturation(params, grid, species);
  else if (name == "ms_three_species_smoke")
    out = ms_three_species_smoke(params, grid, species);
  else
    throw UnknownProfile("initial condition '" + name + "' is not known");
  validate_state(model, out);
  return out;
}

}  // namespace onsager
