#ifndef ONSAGER_GRID_HPP
#define ONSAGER_GRID_HPP

#include <vector>

#include "onsager/errors.hpp"

namespace onsager {

/// Uniform periodic cartesian mesh in 1D or 2D with staggered unknowns:
/// scalars live at cell centers, fluxes at cell faces. 2D grids are square
/// (same cell count per axis). Cell centers sit at (j + 1/2) h, faces at
/// (j + 1) h, all indices wrapping modulo n.
struct PeriodicGrid {
  int dim = 1;
  int n = 2;             // cells per axis
  double side = 1.0;     // domain side length
  double h = 0.5;        // spacing, always side / n

  static PeriodicGrid make(int dim, int n, double side = 1.0);

  int cells() const { return dim == 1 ? n : n * n; }
  int faces_per_axis() const { return cells(); }
  int faces_total() const { return dim * cells(); }
  double cell_volume() const { return dim == 1 ? h : h * h; }

  // 2D linear index, x-major: cell (ix, iy) -> ix * n + iy.
  int cell_index(int ix, int iy) const { return ix * n + iy; }
  double center(int j) const { return (j + 0.5) * h; }

  bool operator==(const PeriodicGrid&) const = default;
};

/// One real value per cell. In 2D values are x-major (index ix*n + iy).
struct CellField {
  PeriodicGrid grid;
  std::vector<double> values;

  CellField() = default;
  explicit CellField(const PeriodicGrid& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.cells()), fill) {}
  CellField(const PeriodicGrid& g, std::vector<double> v);

  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(values.size()); }
};

/// One real value per face and axis. Axis blocks are stored contiguously:
/// x-faces first, then (in 2D) y-faces. The x-face with index ix*n + iy
/// separates cells (ix, iy) and (ix+1, iy); y-faces analogously.
struct FaceField {
  PeriodicGrid grid;
  std::vector<double> values;

  FaceField() = default;
  explicit FaceField(const PeriodicGrid& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.faces_total()), fill) {}
  FaceField(const PeriodicGrid& g, std::vector<double> v);

  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  int size() const { return static_cast<int>(values.size()); }
  double* axis(int a) { return values.data() + a * grid.faces_per_axis(); }
  const double* axis(int a) const {
    return values.data() + a * grid.faces_per_axis();
  }
};

/// Forward difference to faces, (D_h u)_{j+1/2} = (u_{j+1} - u_j)/h per axis.
FaceField gradient_to_faces(const CellField& u);

/// Centered divergence, (d_h m)_j = (m_{j+1/2} - m_{j-1/2})/h, summed over
/// axes in 2D. Adjoint of -gradient_to_faces under the h^d inner products.
CellField divergence_to_centers(const FaceField& m);

/// Arithmetic two-point average onto faces, (u_j + u_{j+1})/2 per axis.
FaceField average_to_faces(const CellField& u);

/// Midpoint quadrature, h^d * sum of cell values.
double integrate_cells(const CellField& u);

/// Solves -coeff * Lap_h(phi) = rhs on the periodic grid with mean(phi) = 0.
/// Conjugate gradient restricted to the mean-zero subspace; the mean is
/// re-projected every iteration so roundoff cannot reintroduce the nullspace.
/// Requires |mean(rhs)| <= 1e-12 * max|rhs| (solvability on the torus).
CellField solve_periodic_poisson(const CellField& rhs, double coeff);

/// -Lap_h(u) = -d_h(D_h u), the periodic 5-point (3-point in 1D) stencil.
CellField negative_laplacian(const CellField& u);

double mean_value(const CellField& u);

}  // namespace onsager

#endif
