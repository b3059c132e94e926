#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pnph/correctors.hpp"
#include "pnph/fvpoisson.hpp"

using namespace pnph;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("zero rhs gives the zero solution") {
  StructuredGrid g(2, {16, 16, 1}, {1.0, 1.0, 1.0});
  Vec coeff(static_cast<size_t>(g.cell_count()), 1.0);
  Vec rhs(static_cast<size_t>(g.cell_count()), 0.0);
  Vec u = elliptic_solve_periodic(g, coeff, rhs, nullptr, 1e-12);
  for (double v : u) CHECK(v == 0.0);
}

TEST_CASE("periodic solve reproduces the discrete Fourier eigenfunction") {
  const int n = 64;
  StructuredGrid g(2, {n, n, 1}, {1.0, 1.0, 1.0});
  const double h = g.spacing(0);
  const double vol = g.cell_volume();
  // -lap_h sin(2 pi x) = lambda_h sin(2 pi x) with the discrete eigenvalue.
  const double lambda_h = (2.0 - 2.0 * std::cos(2.0 * kPi * h)) / (h * h);
  Vec rhs(static_cast<size_t>(g.cell_count()));
  for (index_t i = 0; i < g.cell_count(); ++i) {
    const auto c = g.coords(i);
    rhs[static_cast<size_t>(i)] = std::sin(2.0 * kPi * g.center(0, c[0])) * vol;
  }
  Vec coeff(static_cast<size_t>(g.cell_count()), 1.0);
  Vec u = elliptic_solve_periodic(g, coeff, rhs, nullptr, 1e-13);
  for (index_t i = 0; i < g.cell_count(); ++i) {
    const auto c = g.coords(i);
    const double expected = std::sin(2.0 * kPi * g.center(0, c[0])) / lambda_h;
    CHECK(u[static_cast<size_t>(i)] == doctest::Approx(expected).epsilon(5e-9));
  }
}

TEST_CASE("masked slab with Neumann walls matches the 1D chain oracle") {
  // Slab of m rows; rhs varies across the slab, zero mean. The oracle solves
  // the 1D three-point chain by direct flux accumulation, independently of
  // the CG path.
  const int n = 32, m = 12;
  StructuredGrid g(2, {n, n, 1}, {1.0, 1.0, 1.0});
  const double h = g.spacing(1);
  std::vector<std::uint8_t> mask(static_cast<size_t>(g.cell_count()), 0);
  for (index_t i = 0; i < g.cell_count(); ++i)
    if (g.coords(i)[1] < m) mask[static_cast<size_t>(i)] = 1;

  std::vector<double> f(m);
  double mean = 0.0;
  for (int j = 0; j < m; ++j) {
    f[static_cast<size_t>(j)] = std::cos(kPi * (j + 0.5) / m);
    mean += f[static_cast<size_t>(j)];
  }
  for (auto& v : f) v -= mean / m;

  const double vol = g.cell_volume();
  Vec rhs(static_cast<size_t>(g.cell_count()), 0.0);
  for (index_t i = 0; i < g.cell_count(); ++i)
    if (mask[static_cast<size_t>(i)])
      rhs[static_cast<size_t>(i)] = f[static_cast<size_t>(g.coords(i)[1])] * vol;

  Vec coeff(static_cast<size_t>(g.cell_count()), 1.0);
  Vec u = elliptic_solve_periodic(g, coeff, rhs, &mask, 1e-13);

  // Oracle: face flux accumulation (q_{1/2} = 0 at the wall), then a second
  // cumulative sum for the values, mean-shifted.
  const double A = g.face_area(1);
  std::vector<double> q(static_cast<size_t>(m + 1), 0.0);
  for (int j = 0; j < m; ++j)
    q[static_cast<size_t>(j + 1)] =
        q[static_cast<size_t>(j)] + f[static_cast<size_t>(j)] * vol / A;
  std::vector<double> w(static_cast<size_t>(m), 0.0);
  for (int j = 0; j + 1 < m; ++j)
    w[static_cast<size_t>(j + 1)] = w[static_cast<size_t>(j)] - q[static_cast<size_t>(j + 1)] * h;
  double wmean = 0.0;
  for (double v : w) wmean += v;
  for (auto& v : w) v -= wmean / m;

  for (index_t i = 0; i < g.cell_count(); ++i) {
    if (!mask[static_cast<size_t>(i)]) continue;
    CHECK(u[static_cast<size_t>(i)] ==
          doctest::Approx(w[static_cast<size_t>(g.coords(i)[1])]).epsilon(1e-8));
  }
}

TEST_CASE("incompatible rhs on a floating domain is rejected") {
  StructuredGrid g(2, {8, 8, 1}, {1.0, 1.0, 1.0});
  Vec coeff(64, 1.0);
  Vec rhs(64, 1.0);  // nonzero mean
  CHECK_THROWS_AS(elliptic_solve_periodic(g, coeff, rhs, nullptr, 1e-12), SolverError);
}

TEST_CASE("harmonic face averaging reproduces the layered effective coefficient") {
  // Serial two-layer medium driven by a Dirichlet pair: the through-flux
  // equals the harmonic mean of the coefficients.
  const int n = 16;
  StructuredGrid g(1, {n, 1, 1}, {1.0, 1.0, 1.0});
  Vec coeff(static_cast<size_t>(n), 1.0);
  for (int i = n / 2; i < n; ++i) coeff[static_cast<size_t>(i)] = 0.2;
  std::array<std::array<OuterFace, 2>, 3> outer{};
  outer[0][0] = {OuterFace::Dirichlet, 1.0};
  outer[0][1] = {OuterFace::Dirichlet, 0.0};
  outer[1][0].kind = outer[1][1].kind = OuterFace::NeumannFlux;
  outer[2][0].kind = outer[2][1].kind = OuterFace::NeumannFlux;
  FvPoisson op(g, coeff, {}, {1.0, 1.0, 1.0}, outer);
  Vec rhs(static_cast<size_t>(n), 0.0), u(static_cast<size_t>(n), 0.0);
  op.solve(rhs, u, 1e-13, 10000);
  const double h = g.spacing(0);
  const double flux = coeff[0] * (1.0 - u[0]) / (0.5 * h);  // into the domain
  const double k_harm = 1.0 / (0.5 / 1.0 + 0.5 / 0.2);
  CHECK(flux == doctest::Approx(k_harm).epsilon(1e-10));
}
