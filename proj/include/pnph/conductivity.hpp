#ifndef PNPH_CONDUCTIVITY_HPP
#define PNPH_CONDUCTIVITY_HPP

#include <optional>

#include "pnph/geometry.hpp"
#include "pnph/linalg.hpp"

namespace pnph {

/// First Dirichlet eigenpair of -lap on the pore phase: u = 0 on the
/// pore-solid interface, periodic continuation across the cell boundary.
struct EigenResult {
  double theta_1 = 0.0;
  Vec u_1;             // full grid, zero on solid; unit discrete L2 norm
  double residual = 0.0;
  int iterations = 0;
};

EigenResult first_dirichlet_eigenvalue(const ReferenceCell& cell, double tol = 1e-8);

/// Cheeger constant of an L1 x L2 rectangle (full side lengths).
double cheeger_rectangle(double L1, double L2);

/// Lower bound theta_1 >= (h/2)^2.
double cheeger_lower_bound(double h);

/// sigma_11 ~ p (epsilon^2 theta_1 / s^2 + c).
double conductivity_estimate(double p, double epsilon, double s, double theta_1, double c);

struct ConductivityObjective {
  double p = 0.5;
  double epsilon = 0.1;
  double s = 1.0;
  double c = 1.0;
};

struct OptimizeResult {
  double L1_star = 0.0;
  double sigma_star = 0.0;       // estimate through the Cheeger lower bound
  double cheeger_h = 0.0;
  double theta_lower_bound = 0.0;
  std::optional<double> L1_star_grid;    // grid search with the exact
  std::optional<double> sigma_star_grid; // rectangle eigenvalue, if requested
};

/// Maximizes the conductivity estimate over the channel height L1 in
/// [L1_lo, L1_hi] with L2 fixed; h is monotone decreasing in L1 so the
/// optimum is the range infimum. `grid_points > 0` additionally runs a grid
/// search using the analytic rectangle eigenvalue pi^2 (1/L1^2 + 1/L2^2).
OptimizeResult optimize_rectangle(double L2_fixed, double L1_lo, double L1_hi,
                                  const ConductivityObjective& obj, int grid_points = 0);

} // namespace pnph

#endif
