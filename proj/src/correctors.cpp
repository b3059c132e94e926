#include "pnph/correctors.hpp"

#include <cmath>
#include <string>

#include "pnph/errors.hpp"

namespace pnph {

int corrector_iteration_cap(const StructuredGrid& grid, double factor) {
  const double n = static_cast<double>(grid.cell_count());
  const int cap = static_cast<int>(std::ceil(factor * std::pow(n, 1.0 / grid.dim)));
  return std::max(cap, 100);
}

Vec corrector_rhs(const FvPoisson& op, int direction) {
  const StructuredGrid& g = op.grid();
  const index_t n = g.cell_count();
  const double h = g.spacing(direction);
  Vec b(static_cast<size_t>(n), 0.0);
  // Face flux of kappa*e_r through the +face is T*h; the cell balance of
  // div(kappa e_r) telescopes, so the rhs is compatible by construction.
  for (index_t i = 0; i < n; ++i) {
    const double t = op.tplus(direction, i);
    if (t == 0.0) continue;
    const index_t j = op.neighbor_plus(direction, i);
    b[static_cast<size_t>(i)] -= t * h;
    b[static_cast<size_t>(j)] += t * h;
  }
  return b;
}

namespace {

FvPoisson make_cell_operator(const ReferenceCell& cell, bool potential_family) {
  const StructuredGrid& g = cell.grid();
  const index_t n = g.cell_count();
  Vec kappa(static_cast<size_t>(n), 1.0);
  std::vector<std::uint8_t> active;
  if (potential_family) {
    const double eps2 = cell.epsilon() * cell.epsilon();
    if (cell.alpha() > 0.0) {
      for (index_t i = 0; i < n; ++i)
        kappa[static_cast<size_t>(i)] = cell.pore(i) ? eps2 : cell.alpha();
    } else {
      active.assign(static_cast<size_t>(n), 0);
      for (index_t i = 0; i < n; ++i)
        if (cell.pore(i)) {
          active[static_cast<size_t>(i)] = 1;
          kappa[static_cast<size_t>(i)] = eps2;
        }
    }
  } else {
    active.assign(static_cast<size_t>(n), 0);
    for (index_t i = 0; i < n; ++i)
      if (cell.pore(i)) active[static_cast<size_t>(i)] = 1;
  }
  return FvPoisson::periodic(g, std::move(kappa), std::move(active));
}

} // namespace

CorrectorField solve_potential_corrector(const ReferenceCell& cell, int direction,
                                         double tol) {
  if (direction < 0 || direction >= cell.dim())
    throw ConfigError("corrector direction out of range");
  if (tol <= 0.0) throw ConfigError("corrector tolerance must be positive");
  FvPoisson op = make_cell_operator(cell, /*potential_family=*/true);
  const Vec b = corrector_rhs(op, direction);
  CorrectorField xi;
  xi.family = CorrectorFamily::Potential;
  xi.domain = (cell.alpha() > 0.0) ? CorrectorDomain::FullCell : CorrectorDomain::PoreOnly;
  xi.direction = direction;
  xi.values.assign(b.size(), 0.0);
  const IterStats st =
      op.solve(b, xi.values, tol, corrector_iteration_cap(cell.grid()));
  xi.residual = st.residual;
  xi.iterations = st.iterations;
  return xi;
}

CorrectorField solve_ion_corrector(const ReferenceCell& cell, int direction,
                                   const CorrectorField& xi33, double tol) {
  if (direction < 0 || direction >= cell.dim())
    throw ConfigError("corrector direction out of range");
  if (xi33.family != CorrectorFamily::Potential)
    throw ConfigError("ion corrector requires a potential-family corrector input");
  if (xi33.direction != direction)
    throw ConfigError("ion corrector: direction mismatch with xi33");
  if (xi33.values.size() != static_cast<size_t>(cell.grid().cell_count()))
    throw ConfigError("ion corrector: xi33 grid mismatch");
  FvPoisson op = make_cell_operator(cell, /*potential_family=*/false);
  // The combined interface condition cancels the wall fluxes of the affine
  // parts, leaving A_pore xi = A_pore xi33 restricted to the electrolyte.
  Vec b;
  op.apply(xi33.values, b);
  CorrectorField xi;
  xi.family = CorrectorFamily::Ion;
  xi.domain = CorrectorDomain::PoreOnly;
  xi.direction = direction;
  xi.values.assign(b.size(), 0.0);
  const IterStats st =
      op.solve(b, xi.values, tol, corrector_iteration_cap(cell.grid()));
  xi.residual = st.residual;
  xi.iterations = st.iterations;
  return xi;
}

Vec elliptic_solve_periodic(const StructuredGrid& grid, const Vec& coeff, const Vec& rhs,
                            const std::vector<std::uint8_t>* mask, double tol,
                            double compat_tol) {
  if (tol <= 0.0) throw ConfigError("elliptic solve tolerance must be positive");
  FvPoisson op = FvPoisson::periodic(grid, coeff,
                                     mask ? *mask : std::vector<std::uint8_t>{});
  Vec u(rhs.size(), 0.0);
  op.solve(rhs, u, tol, corrector_iteration_cap(grid), compat_tol);
  return u;
}

} // namespace pnph
