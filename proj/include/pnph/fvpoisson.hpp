#ifndef PNPH_FVPOISSON_HPP
#define PNPH_FVPOISSON_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "pnph/linalg.hpp"
#include "pnph/structured.hpp"

namespace pnph {

/// Outer boundary treatment per (axis, side) for the elliptic kernel.
struct OuterFace {
  enum Kind { Periodic, NeumannFlux, Dirichlet } kind = Periodic;
  double value = 0.0;  // Dirichlet value, or prescribed outward flux density
};

/// Cell-centered finite-volume discretization of  -div(kappa grad u) = f
/// on a structured grid, optionally restricted to an active voxel mask.
///
/// Face transmissibilities use harmonic averaging of the cell coefficients,
/// which reproduces layered-media effective coefficients exactly. Faces to
/// inactive voxels are homogeneous Neumann by default or homogeneous
/// Dirichlet (half-cell distance) when `interface_dirichlet` is set.
///
/// The same kernel backs the periodic corrector problems, the macroscopic
/// and microscopic Poisson solves, and the shifted solves of the inverse
/// power iteration.
class FvPoisson {
public:
  /// `mass_diag`, when given, adds a nonnegative zeroth-order term per cell
  /// (a reaction/linearization coefficient); cells carrying it ground their
  /// component, so no mean projection happens there.
  FvPoisson(const StructuredGrid& grid, Vec kappa, std::vector<std::uint8_t> active,
            std::array<double, 3> axis_mult, std::array<std::array<OuterFace, 2>, 3> outer,
            bool interface_dirichlet = false, Vec mass_diag = {});

  /// Convenience: fully periodic, all cells active, isotropic multiplier 1.
  static FvPoisson periodic(const StructuredGrid& grid, Vec kappa,
                            std::vector<std::uint8_t> active = {});

  void apply(const Vec& u, Vec& out) const;

  /// Solves A u = rhs + (boundary data terms). On floating (pure-Neumann)
  /// components the rhs must be compatible; its component means are checked
  /// against `compat_tol` and projected, and the solution is returned with
  /// zero mean on those components. Throws SolverError on failure.
  IterStats solve(const Vec& rhs, Vec& u, double tol, int max_iter,
                  double compat_tol = 1e-10) const;

  /// Energy product u' A v restricted to the active set.
  double energy(const Vec& u, const Vec& v) const;

  const StructuredGrid& grid() const { return *grid_; }
  bool is_active(index_t i) const { return active_[static_cast<size_t>(i)] != 0; }
  const std::vector<std::uint8_t>& active() const { return active_; }
  index_t active_count() const { return active_count_; }
  const Vec& diagonal() const { return diag_; }
  const Vec& boundary_rhs() const { return rhs_bc_; }
  bool has_floating_component() const { return floating_count_ > 0; }
  int component_count() const { return ncomp_; }
  const std::vector<int>& components() const { return comp_; }

  /// Transmissibility of the +face of cell i along axis (0 when the face is
  /// Neumann, outer, or couples to an inactive cell).
  double tplus(int axis, index_t i) const { return tp_[axis][static_cast<size_t>(i)]; }
  index_t neighbor_plus(int axis, index_t i) const {
    return nbp_[axis][static_cast<size_t>(i)];
  }

  /// Subtracts the mean of v over each floating component.
  void project_floating(Vec& v) const;

private:
  const StructuredGrid* grid_;
  Vec kappa_;
  std::vector<std::uint8_t> active_;
  std::array<double, 3> axis_mult_;
  std::array<std::array<OuterFace, 2>, 3> outer_;
  bool interface_dirichlet_;

  std::array<std::vector<index_t>, 3> nbp_;  // +neighbor or -1 at outer boundary
  std::array<Vec, 3> tp_;
  Vec mass_diag_;
  Vec diag_;
  Vec rhs_bc_;
  index_t active_count_ = 0;
  std::vector<int> comp_;
  int ncomp_ = 0;
  std::vector<std::uint8_t> comp_floating_;
  int floating_count_ = 0;

  void build();
};

} // namespace pnph

#endif
