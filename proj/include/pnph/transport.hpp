#ifndef PNPH_TRANSPORT_HPP
#define PNPH_TRANSPORT_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "pnph/linalg.hpp"
#include "pnph/macro.hpp"
#include "pnph/structured.hpp"

namespace pnph {

/// Implicit exponential-fitted drift-diffusion operator for one species with
/// frozen potential:  (p V / dt) c' + div_h F(c') = (p V / dt) c + data.
/// Face fluxes F = T [B(delta) c_i - B(-delta) c_j] with
/// delta = z (M_a/D_a) (phi_j - phi_i). Works on an optional voxel mask
/// (blocking walls at mask boundaries) with the macroscopic boundary
/// vocabulary on the outer faces. The flux form conserves species mass
/// exactly under blocking boundaries.
class TransportOperator {
public:
  TransportOperator(const StructuredGrid& g, std::vector<std::uint8_t> mask,
                    const Vec& phi, double z, const std::array<double, 3>& D,
                    const std::array<double, 3>& M, double p, double dt,
                    const BoundarySpec& bc);

  void apply(const Vec& x, Vec& y) const;
  Vec rhs(const Vec& c_old, const Vec* extra = nullptr) const;

  /// Implicit solve; returns iteration stats. Negative results within the
  /// guard window are clamped to zero, deeper negatives throw SolverError.
  /// With `raw_negative` the result is returned untouched so the caller can
  /// classify sign changes itself (the thin-DL depletion check).
  IterStats solve(const Vec& c_old, Vec& c_new, double tol, int max_iter,
                  double negative_guard, const Vec* extra_rhs = nullptr,
                  bool raw_negative = false) const;

  /// Steady flux divergence div_h F(c) per cell (no time term, includes
  /// boundary closures); used for residual checks.
  Vec flux_divergence(const Vec& c) const;

  double pv_dt() const { return pv_dt_; }
  bool is_active(index_t i) const { return mask_[static_cast<size_t>(i)] != 0; }

  // Face data exposed for the coupled salt/charge assembly.
  const StructuredGrid* grid_ = nullptr;
  std::vector<std::uint8_t> mask_;
  std::array<Vec, 3> fa_, fb_;                 // +face SG coefficients
  std::array<std::vector<index_t>, 3> nbp_;    // +face neighbor (-1 if none)
  Vec diag_bc_, rhs_bc_;
  Vec diag_;                                   // full diagonal for Jacobi
  double pv_dt_ = 0.0;
};

/// Sign convention of the species boundary data for charge z: Dirichlet
/// concentration is taken from c_plus/c_minus, applied current ι enters as
/// outward species flux z*ι.
double species_dirichlet_value(const FaceCondition& fc, double z);

} // namespace pnph

#endif
