#include "onsager/grid.hpp"

#include <cmath>
#include <string>

namespace onsager {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x))
      throw DomainViolation(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

PeriodicGrid PeriodicGrid::make(int dim, int n, double side) {
  if (dim != 1 && dim != 2)
    throw DomainViolation("grid dim must be 1 or 2, got " + std::to_string(dim));
  if (n < 2)
    throw DomainViolation("grid needs n >= 2 cells per axis, got " +
                          std::to_string(n));
  if (!(side > 0.0) || !std::isfinite(side))
    throw DomainViolation("grid side length must be positive and finite");
  PeriodicGrid g;
  g.dim = dim;
  g.n = n;
  g.side = side;
  g.h = side / n;
  return g;
}

CellField::CellField(const PeriodicGrid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != g.cells())
    throw DomainViolation("cell field size does not match grid cell count");
  require_finite(values, "cell field");
}

FaceField::FaceField(const PeriodicGrid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != g.faces_total())
    throw DomainViolation("face field size does not match grid face count");
  require_finite(values, "face field");
}

FaceField gradient_to_faces(const CellField& u) {
  const PeriodicGrid& g = u.grid;
  FaceField out(g);
  const double inv_h = 1.0 / g.h;
  if (g.dim == 1) {
    const int n = g.n;
    for (int j = 0; j < n; ++j)
      out[j] = (u[(j + 1) % n] - u[j]) * inv_h;
    return out;
  }
  const int n = g.n;
  double* ox = out.axis(0);
  double* oy = out.axis(1);
  for (int ix = 0; ix < n; ++ix) {
    const int ixp = (ix + 1) % n;
    for (int iy = 0; iy < n; ++iy) {
      const int c = g.cell_index(ix, iy);
      ox[c] = (u[g.cell_index(ixp, iy)] - u[c]) * inv_h;
      oy[c] = (u[g.cell_index(ix, (iy + 1) % n)] - u[c]) * inv_h;
    }
  }
  return out;
}

CellField divergence_to_centers(const FaceField& m) {
  const PeriodicGrid& g = m.grid;
  CellField out(g);
  const double inv_h = 1.0 / g.h;
  if (g.dim == 1) {
    const int n = g.n;
    for (int j = 0; j < n; ++j)
      out[j] = (m[j] - m[(j + n - 1) % n]) * inv_h;
    return out;
  }
  const int n = g.n;
  const double* mx = m.axis(0);
  const double* my = m.axis(1);
  for (int ix = 0; ix < n; ++ix) {
    const int ixm = (ix + n - 1) % n;
    for (int iy = 0; iy < n; ++iy) {
      const int c = g.cell_index(ix, iy);
      out[c] = (mx[c] - mx[g.cell_index(ixm, iy)]) * inv_h +
               (my[c] - my[g.cell_index(ix, (iy + n - 1) % n)]) * inv_h;
    }
  }
  return out;
}

FaceField average_to_faces(const CellField& u) {
  const PeriodicGrid& g = u.grid;
  FaceField out(g);
  if (g.dim == 1) {
    const int n = g.n;
    for (int j = 0; j < n; ++j)
      out[j] = 0.5 * (u[j] + u[(j + 1) % n]);
    return out;
  }
  const int n = g.n;
  double* ox = out.axis(0);
  double* oy = out.axis(1);
  for (int ix = 0; ix < n; ++ix) {
    const int ixp = (ix + 1) % n;
    for (int iy = 0; iy < n; ++iy) {
      const int c = g.cell_index(ix, iy);
      ox[c] = 0.5 * (u[c] + u[g.cell_index(ixp, iy)]);
      oy[c] = 0.5 * (u[c] + u[g.cell_index(ix, (iy + 1) % n)]);
    }
  }
  return out;
}

double integrate_cells(const CellField& u) {
  double s = 0.0;
  for (double x : u.values) s += x;
  return s * u.grid.cell_volume();
}

double mean_value(const CellField& u) {
  double s = 0.0;
  for (double x : u.values) s += x;
  return s / static_cast<double>(u.size());
}

CellField negative_laplacian(const CellField& u) {
  CellField out = divergence_to_centers(gradient_to_faces(u));
  for (double& x : out.values) x = -x;
  return out;
}

CellField solve_periodic_poisson(const CellField& rhs, double coeff) {
  if (!(coeff > 0.0))
    throw DomainViolation("poisson coefficient must be positive");
  const PeriodicGrid& g = rhs.grid;
  const int n_total = g.cells();

  double max_abs = 0.0;
  for (double x : rhs.values) max_abs = std::max(max_abs, std::abs(x));
  const double mean = mean_value(rhs);
  if (std::abs(mean) > 1e-12 * max_abs)
    throw NonNeutralSource("poisson right-hand side has nonzero mean " +
                           std::to_string(mean));

  CellField b = rhs;
  for (double& x : b.values) x -= mean;

  double b_norm2 = 0.0;
  for (double x : b.values) b_norm2 += x * x;
  const double b_norm = std::sqrt(b_norm2);
  if (b_norm == 0.0) return CellField(g);

  // Solve on the normalized source so the 1e-12 residual floor acts
  // relatively; the result is rescaled at the end.
  for (double& x : b.values) x /= b_norm;
  const double tol = 1e-12;
  const int max_iter = 10 * n_total;

  auto apply = [&](const CellField& x) {
    CellField ax = negative_laplacian(x);
    for (double& v : ax.values) v *= coeff;
    return ax;
  };
  auto remove_mean = [&](CellField& x) {
    const double m = mean_value(x);
    for (double& v : x.values) v -= m;
  };

  CellField phi(g);
  CellField r = b;
  CellField p = r;
  double rr = 1.0;
  auto finish = [&]() {
    for (double& x : phi.values) x *= b_norm;
    remove_mean(phi);
    return phi;
  };
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= tol) return finish();
    CellField ap = apply(p);
    remove_mean(ap);
    double pap = 0.0;
    for (int i = 0; i < n_total; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0))
      throw NoConvergence("poisson CG lost positive definiteness",
                          std::sqrt(rr), it);
    const double alpha = rr / pap;
    for (int i = 0; i < n_total; ++i) {
      phi[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    remove_mean(phi);
    remove_mean(r);
    double rr_new = 0.0;
    for (int i = 0; i < n_total; ++i) rr_new += r[i] * r[i];
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n_total; ++i) p[i] = r[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= tol) return finish();
  throw NoConvergence("poisson CG did not reach tolerance", std::sqrt(rr),
                      max_iter);
}

}  // namespace onsager
