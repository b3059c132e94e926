#ifndef PNPH_SCHEME_HPP
#define PNPH_SCHEME_HPP

#include <cmath>

namespace pnph {

/// Bernoulli function B(x) = x / (exp(x) - 1), series near zero.
inline double bernoulli(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - 0.5 * x + x2 / 12.0 - x2 * x2 / 720.0;
  }
  return x / std::expm1(x);  // overflows gracefully to 0 for large positive x
}

/// Exponentially fitted (Scharfetter-Gummel) edge flux from node i to node j
/// per unit transmissibility D/h: delta = psi_j - psi_i with psi the drift
/// potential of the species. Vanishes exactly on c ~ exp(-psi).
inline double sg_flux(double c_i, double c_j, double delta) {
  return bernoulli(delta) * c_i - bernoulli(-delta) * c_j;
}

/// The same edge flux written in Slotboom variables u = c exp(psi):
/// F = B(delta) exp(-psi_i) (u_i - u_j). Algebraically identical to sg_flux;
/// kept as the gradient-flow route for the mean-field Einstein check.
inline double sg_flux_slotboom(double c_i, double c_j, double psi_i, double psi_j) {
  const double u_i = c_i * std::exp(psi_i);
  const double u_j = c_j * std::exp(psi_j);
  return bernoulli(psi_j - psi_i) * std::exp(-psi_i) * (u_i - u_j);
}

} // namespace pnph

#endif
