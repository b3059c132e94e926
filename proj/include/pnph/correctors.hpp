#ifndef PNPH_CORRECTORS_HPP
#define PNPH_CORRECTORS_HPP

#include <vector>

#include "pnph/fvpoisson.hpp"
#include "pnph/geometry.hpp"
#include "pnph/linalg.hpp"

namespace pnph {

enum class CorrectorFamily { Ion, Potential };
enum class CorrectorDomain { PoreOnly, FullCell };

/// Periodic zero-mean corrector xi for one family and direction. Values are
/// stored on the full grid with zeros outside the field's domain.
struct CorrectorField {
  CorrectorFamily family = CorrectorFamily::Potential;
  CorrectorDomain domain = CorrectorDomain::FullCell;
  int direction = 0;  // axis index, 0-based
  Vec values;
  double residual = 0.0;
  int iterations = 0;
};

/// Iteration cap used by the cell solves: factor * (total voxels)^(1/dim).
int corrector_iteration_cap(const StructuredGrid& grid, double factor = 50.0);

/// Solves -div( eps_hat(y) grad(xi - y_r) ) = 0 on the cell, Y-periodic with
/// zero mean, with eps_hat = epsilon^2 on the pore and alpha on the solid.
/// For alpha = 0 the solid unknowns are dropped and the pore problem gets
/// homogeneous Neumann walls.
CorrectorField solve_potential_corrector(const ReferenceCell& cell, int direction,
                                         double tol = 1e-11);

/// Solves the electrolyte-phase corrector -lap(xi - y_r) = -lap(xi33 - y_r)
/// with the combined interface flux condition; periodic, zero mean over the
/// pore. `xi33` must come from the same cell and direction.
CorrectorField solve_ion_corrector(const ReferenceCell& cell, int direction,
                                   const CorrectorField& xi33, double tol = 1e-11);

/// Shared periodic elliptic kernel exposed directly: solves
/// -div(coeff grad u) = rhs on the (optionally masked) periodic grid and
/// returns the zero-mean solution. Throws on incompatible rhs.
Vec elliptic_solve_periodic(const StructuredGrid& grid, const Vec& coeff, const Vec& rhs,
                            const std::vector<std::uint8_t>* mask, double tol,
                            double compat_tol = 1e-10);

/// Divergence of the affine source div(kappa e_r), assembled with the same
/// face coefficients as `op`; this is the right-hand side of the corrector
/// problems (negated).
Vec corrector_rhs(const FvPoisson& op, int direction);

} // namespace pnph

#endif
