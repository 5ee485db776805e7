#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "onsager/grid.hpp"
#include "oracles.hpp"

using namespace onsager;

namespace {

double dot_cells(const CellField& a, const CellField& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid.cell_volume();
}

double dot_faces(const FaceField& a, const FaceField& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid.cell_volume();
}

}  // namespace

TEST_CASE("grid construction and invariants") {
  PeriodicGrid g = PeriodicGrid::make(1, 8);
  CHECK(g.h == 1.0 / 8);
  CHECK(g.cells() == 8);
  CHECK(g.faces_total() == 8);

  PeriodicGrid g2 = PeriodicGrid::make(2, 4, 100.0);
  CHECK(g2.h == 100.0 / 4);
  CHECK(g2.cells() == 16);
  CHECK(g2.faces_total() == 32);
  CHECK(g2.cell_volume() == 25.0 * 25.0);

  CHECK_THROWS_AS(PeriodicGrid::make(3, 4), DomainViolation);
  CHECK_THROWS_AS(PeriodicGrid::make(1, 1), DomainViolation);
  CHECK_THROWS_AS(PeriodicGrid::make(1, 8, -1.0), DomainViolation);
  CHECK_THROWS_AS(CellField(g, std::vector<double>(3, 0.0)), DomainViolation);
  CHECK_THROWS_AS(CellField(g, std::vector<double>(8, std::nan(""))),
                  DomainViolation);
}

TEST_CASE("gradient_to_faces stencil") {
  SUBCASE("constant field gives exactly zero") {
    PeriodicGrid g = PeriodicGrid::make(1, 5);
    FaceField d = gradient_to_faces(CellField(g, 3.7));
    for (int f = 0; f < d.size(); ++f) CHECK(d[f] == 0.0);
  }
  SUBCASE("N=4 alternating values") {
    PeriodicGrid g = PeriodicGrid::make(1, 4);
    CellField u(g, {0.0, 1.0, 0.0, 1.0});
    FaceField d = gradient_to_faces(u);
    CHECK(d[0] == 4.0);
    CHECK(d[1] == -4.0);
    CHECK(d[2] == 4.0);
    CHECK(d[3] == -4.0);
  }
  SUBCASE("second-order accuracy on a sine wave") {
    // analytic bound: 2 pi |1 - sinc(pi h)| <= (pi^3 / 3) h^2
    for (int n : {32, 64}) {
      PeriodicGrid g = PeriodicGrid::make(1, n);
      CellField u(g);
      for (int j = 0; j < n; ++j) u[j] = std::sin(2.0 * M_PI * g.center(j));
      FaceField d = gradient_to_faces(u);
      double max_err = 0.0;
      for (int f = 0; f < n; ++f) {
        const double xf = (f + 1) * g.h;
        max_err = std::max(max_err,
                           std::abs(d[f] - 2.0 * M_PI * std::cos(2.0 * M_PI * xf)));
      }
      CHECK(max_err <= 1.01 * std::pow(M_PI, 3) / 3.0 * g.h * g.h);
    }
  }
}

TEST_CASE("divergence_to_centers stencil") {
  SUBCASE("constant per axis gives exactly zero") {
    PeriodicGrid g = PeriodicGrid::make(2, 4);
    FaceField m(g);
    for (int f = 0; f < g.faces_per_axis(); ++f) {
      m.axis(0)[f] = 2.5;
      m.axis(1)[f] = -1.25;
    }
    CellField div = divergence_to_centers(m);
    for (int c = 0; c < div.size(); ++c) CHECK(div[c] == 0.0);
  }
  SUBCASE("N=3 single face value") {
    PeriodicGrid g = PeriodicGrid::make(1, 3, 1.0);
    FaceField m(g, {1.0, 0.0, 0.0});
    CellField div = divergence_to_centers(m);
    CHECK(div[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(div[1] == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(div[2] == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("cell sum of a divergence telescopes to zero") {
    std::mt19937 rng(42);
    PeriodicGrid g = PeriodicGrid::make(1, 8);
    // lattice-valued data: the telescoping sum is exact, not just small
    FaceField m(g, oracles::random_lattice_vector(rng, 8));
    CellField div = divergence_to_centers(m);
    double sum = 0.0;
    for (int c = 0; c < div.size(); ++c) sum += div[c];
    CHECK(sum == 0.0);
  }
}

TEST_CASE("average_to_faces") {
  SUBCASE("constants preserved exactly") {
    PeriodicGrid g = PeriodicGrid::make(2, 3);
    FaceField a = average_to_faces(CellField(g, 0.9));
    for (int f = 0; f < a.size(); ++f) CHECK(a[f] == 0.9);
  }
  SUBCASE("N=2 pair") {
    PeriodicGrid g = PeriodicGrid::make(1, 2);
    FaceField a = average_to_faces(CellField(g, {1.0, 3.0}));
    CHECK(a[0] == 2.0);
    CHECK(a[1] == 2.0);
  }
  SUBCASE("positivity preserved") {
    std::mt19937 rng(7);
    PeriodicGrid g = PeriodicGrid::make(1, 16);
    CellField u(g, oracles::random_vector(rng, 16, 0.01, 5.0));
    FaceField a = average_to_faces(u);
    for (int f = 0; f < a.size(); ++f) CHECK(a[f] > 0.0);
  }
}

TEST_CASE("integrate_cells midpoint rule") {
  PeriodicGrid g = PeriodicGrid::make(1, 4);
  CHECK(integrate_cells(CellField(g, 1.0)) == 1.0);
  CHECK(integrate_cells(CellField(g, 0.0)) == 0.0);
  CellField x(g);
  for (int j = 0; j < 4; ++j) x[j] = g.center(j);
  CHECK(integrate_cells(x) == 0.5);  // midpoint rule is exact on linears

  PeriodicGrid g2 = PeriodicGrid::make(2, 8, 2.0);
  CHECK(integrate_cells(CellField(g2, 1.0)) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("operators are linear and adjoint (summation by parts)") {
  std::mt19937 rng(123);
  for (int dim : {1, 2}) {
    PeriodicGrid g = PeriodicGrid::make(dim, dim == 1 ? 16 : 6, 1.5);
    CellField u(g, oracles::random_vector(rng, g.cells(), -2.0, 2.0));
    CellField v(g, oracles::random_vector(rng, g.cells(), -2.0, 2.0));
    FaceField m(g, oracles::random_vector(rng, g.faces_total(), -2.0, 2.0));

    // <D_h u, m> = -<u, d_h m> with h^d-weighted inner products
    const double lhs = dot_faces(gradient_to_faces(u), m);
    const double rhs = -dot_cells(u, divergence_to_centers(m));
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (std::abs(lhs) + std::abs(rhs) + 1.0));

    // linearity of gradient and average
    const double a = 1.7, b = -0.4;
    CellField comb(g);
    for (int c = 0; c < g.cells(); ++c) comb[c] = a * u[c] + b * v[c];
    FaceField gc = gradient_to_faces(comb);
    FaceField gu = gradient_to_faces(u);
    FaceField gv = gradient_to_faces(v);
    FaceField ac = average_to_faces(comb);
    FaceField au = average_to_faces(u);
    FaceField av = average_to_faces(v);
    for (int f = 0; f < g.faces_total(); ++f) {
      CHECK(gc[f] == doctest::Approx(a * gu[f] + b * gv[f]).epsilon(1e-13));
      CHECK(ac[f] == doctest::Approx(a * au[f] + b * av[f]).epsilon(1e-13));
    }

    // divergence of a gradient sums to zero over cells
    CellField lap = divergence_to_centers(gradient_to_faces(u));
    double sum = 0.0;
    for (int c = 0; c < g.cells(); ++c) sum += lap[c];
    CHECK(std::abs(sum) <= 1e-12 * g.cells());
  }
  // exact version of the zero-sum identity on lattice data with dyadic h
  PeriodicGrid g = PeriodicGrid::make(1, 8);
  CellField u(g, oracles::random_lattice_vector(rng, 8));
  CellField lap = divergence_to_centers(gradient_to_faces(u));
  double sum = 0.0;
  for (int c = 0; c < g.cells(); ++c) sum += lap[c];
  CHECK(sum == 0.0);
}

TEST_CASE("periodic poisson solver") {
  SUBCASE("zero source gives the zero potential") {
    PeriodicGrid g = PeriodicGrid::make(1, 8);
    CellField phi = solve_periodic_poisson(CellField(g), 1.0);
    for (int c = 0; c < phi.size(); ++c) CHECK(phi[c] == 0.0);
  }

  SUBCASE("sine mode against the discrete eigenvalue and a dense solve") {
    const int n = 8;
    PeriodicGrid g = PeriodicGrid::make(1, n);
    CellField rhs(g);
    for (int j = 0; j < n; ++j) rhs[j] = std::sin(2.0 * M_PI * g.center(j));
    CellField phi = solve_periodic_poisson(rhs, 1.0);

    const double lambda1 =
        4.0 / (g.h * g.h) * std::pow(std::sin(M_PI * g.h), 2);
    CHECK(lambda1 == doctest::Approx(37.49033200812192).epsilon(1e-12));
    for (int j = 0; j < n; ++j)
      CHECK(phi[j] == doctest::Approx(rhs[j] / lambda1).epsilon(1e-9));

    Eigen::VectorXd rv(n);
    for (int j = 0; j < n; ++j) rv(j) = rhs[j];
    Eigen::VectorXd dense = oracles::dense_poisson_solve(
        oracles::dense_negative_laplacian_1d(n, g.h), rv, 1.0);
    for (int j = 0; j < n; ++j)
      CHECK(phi[j] == doctest::Approx(dense(j)).epsilon(1e-9));
  }

  SUBCASE("2D random neutral source against a dense solve") {
    std::mt19937 rng(5);
    const int n = 4;
    PeriodicGrid g = PeriodicGrid::make(2, n);
    CellField rhs(g, oracles::random_vector(rng, g.cells(), -1.0, 1.0));
    const double mean = mean_value(rhs);
    for (double& x : rhs.values) x -= mean;
    CellField phi = solve_periodic_poisson(rhs, 0.7);

    Eigen::VectorXd rv(g.cells());
    for (int c = 0; c < g.cells(); ++c) rv(c) = rhs[c];
    Eigen::VectorXd dense = oracles::dense_poisson_solve(
        oracles::dense_negative_laplacian_2d(n, g.h), rv, 0.7);
    for (int c = 0; c < g.cells(); ++c)
      CHECK(phi[c] == doctest::Approx(dense(c)).epsilon(1e-8));
  }

  SUBCASE("residual, mean pinning, and determinism") {
    std::mt19937 rng(9);
    PeriodicGrid g = PeriodicGrid::make(1, 32);
    CellField rhs(g, oracles::random_vector(rng, 32, -1.0, 1.0));
    const double mean = mean_value(rhs);
    for (double& x : rhs.values) x -= mean;
    CellField phi = solve_periodic_poisson(rhs, 2.0);
    CHECK(std::abs(mean_value(phi)) <= 1e-12);

    CellField lap = negative_laplacian(phi);
    double res = 0.0, rnorm = 0.0;
    for (int c = 0; c < 32; ++c) {
      const double r = 2.0 * lap[c] - rhs[c];
      res += r * r;
      rnorm += rhs[c] * rhs[c];
    }
    CHECK(std::sqrt(res) <= 1e-10 * std::sqrt(rnorm));

    CellField phi2 = solve_periodic_poisson(rhs, 2.0);
    for (int c = 0; c < 32; ++c) CHECK(phi[c] == phi2[c]);  // bit-identical
  }

  SUBCASE("nonzero mean source is rejected") {
    PeriodicGrid g = PeriodicGrid::make(1, 8);
    CellField rhs(g, 0.1);
    CHECK_THROWS_AS(solve_periodic_poisson(rhs, 1.0), NonNeutralSource);
    CHECK_THROWS_AS(solve_periodic_poisson(CellField(g, 1.0), 0.0),
                    DomainViolation);
  }
}
