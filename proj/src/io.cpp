#include "onsager/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace onsager {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_series(const std::vector<DiagnosticsRow>& rows,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open series file '" + path + "'");
  const size_t s = rows.empty() ? 1 : rows.front().mass.size();
  out << "step,time,energy,dissipation_over_tau,kkt_residual,"
         "constraint_residual,inner_iterations";
  for (size_t i = 1; i <= s; ++i) out << ",mass_" << i;
  for (size_t i = 1; i <= s; ++i) out << ",min_" << i;
  for (size_t i = 1; i <= s; ++i) out << ",max_" << i;
  out << "\n";
  for (const DiagnosticsRow& r : rows) {
    out << r.step << ',' << format_real(r.time) << ',' << format_real(r.energy)
        << ',' << format_real(r.dissipation_over_tau) << ','
        << format_real(r.kkt_residual) << ','
        << format_real(r.constraint_residual) << ',' << r.inner_iterations;
    for (double m : r.mass) out << ',' << format_real(m);
    for (double m : r.min_value) out << ',' << format_real(m);
    for (double m : r.max_value) out << ',' << format_real(m);
    out << "\n";
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_snapshot(const SystemState& state, const std::string& path) {
  if (state.components.empty())
    throw IoError("snapshot of a state with no components");
  const PeriodicGrid& g = state.components.front().grid;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open snapshot file '" + path + "'");
  out << "# dim " << g.dim << "\n";
  out << "# n_per_axis " << g.n << "\n";
  out << "# h " << format_real(g.h) << "\n";
  out << "# components " << state.components.size() << "\n";
  if (g.dim == 1) {
    for (int j = 0; j < g.n; ++j) {
      out << j;
      for (const CellField& u : state.components)
        out << ',' << format_real(u[j]);
      out << "\n";
    }
  } else {
    for (int ix = 0; ix < g.n; ++ix)
      for (int iy = 0; iy < g.n; ++iy) {
        out << ix << ',' << iy;
        for (const CellField& u : state.components)
          out << ',' << format_real(u[g.cell_index(ix, iy)]);
        out << "\n";
      }
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

namespace {

std::string header_value(const std::string& line, const std::string& key,
                         const std::string& path) {
  const std::string prefix = "# " + key + " ";
  if (line.rfind(prefix, 0) != 0)
    throw IoError("snapshot '" + path + "': expected header '" + prefix + "'");
  return line.substr(prefix.size());
}

}  // namespace

SystemState read_snapshot(const std::string& path, const PeriodicGrid& grid) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open snapshot file '" + path + "'");
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(in, line))
      throw IoError("snapshot '" + path + "': truncated header");
  };
  next_line();
  const int dim = std::stoi(header_value(line, "dim", path));
  next_line();
  const int n = std::stoi(header_value(line, "n_per_axis", path));
  next_line();
  const double h = std::stod(header_value(line, "h", path));
  next_line();
  const int comps = std::stoi(header_value(line, "components", path));

  if (dim != grid.dim || n != grid.n)
    throw IoError("snapshot '" + path + "' grid (dim " + std::to_string(dim) +
                  ", n " + std::to_string(n) + ") does not match the run grid");
  if (h != grid.h)
    throw IoError("snapshot '" + path + "' spacing does not match the run grid");
  if (comps < 1) throw IoError("snapshot '" + path + "' has no components");

  SystemState out;
  for (int i = 0; i < comps; ++i) out.components.emplace_back(grid);
  const int index_cols = dim;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (static_cast<int>(cols.size()) != index_cols + comps)
      throw IoError("snapshot '" + path + "': malformed row '" + line + "'");
    int c;
    if (dim == 1) {
      c = std::stoi(cols[0]);
    } else {
      c = grid.cell_index(std::stoi(cols[0]), std::stoi(cols[1]));
    }
    if (c < 0 || c >= grid.cells())
      throw IoError("snapshot '" + path + "': cell index out of range");
    for (int i = 0; i < comps; ++i)
      out.components[i][c] = std::stod(cols[index_cols + i]);
    ++rows;
  }
  if (rows != grid.cells())
    throw IoError("snapshot '" + path + "' has " + std::to_string(rows) +
                  " rows, grid has " + std::to_string(grid.cells()) + " cells");
  return out;
}

}  // namespace onsager
