#ifndef PNPH_MICRO_HPP
#define PNPH_MICRO_HPP

#include <cstdint>
#include <vector>

#include "pnph/geometry.hpp"
#include "pnph/macro.hpp"

namespace pnph {

/// Perforated domain Omega = [0,1]^2 built by tiling a reference cell n x n
/// at period r = 1/n. Interface facets carry the Neumann datum r * sigma_s.
struct MicroDomain {
  StructuredGrid grid;
  std::vector<std::uint8_t> pore_mask;
  std::vector<InterfaceFacet> facets;  // micro-scale areas, unscaled sigma
  int tiles = 1;
  double r = 1.0;
  double epsilon = 0.1;
  double alpha = 0.0;
  BoundarySpec outer_bc;
  index_t pore_cells = 0;
  std::vector<int> pore_component;  // -1 on solid; non-periodic adjacency
  int component_count = 0;
};

struct MicroState {
  Vec c_plus, c_minus;  // pore voxels; zero on solid
  Vec phi;              // all voxels
  double time = 0.0;
};

struct MicroOptions {
  index_t voxel_cap = index_t(1) << 22;  // consistency evidence, not DNS
  StepOptions step;
};

/// Tiles the cell n x n; the facet flux datum is scaled by r as in the
/// periodic boundary condition of the microscopic system.
MicroDomain build_perforated_domain(const ReferenceCell& cell, int n,
                                    const BoundarySpec& outer_bc,
                                    const MicroOptions& opts = {});

MicroState micro_uniform_state(const MicroDomain& dom, double c_plus, double c_minus);

/// State with the given salt profile and the species imbalance chosen per
/// pore component so that every component is internally charge-neutral
/// against its own surface charge (required for blocking walls with an
/// insulating matrix, where each component carries its own Gauss law).
MicroState micro_neutral_state(const MicroDomain& dom, const Vec& salt);

/// One semi-implicit step of the microscopic PNP system: two-phase Poisson
/// with the surface charge entering as facet sources, then exponentially
/// fitted blocking-wall transport of both species on the pore.
MicroState step_micro_pnp(const MicroDomain& dom, const MicroState& state, double dt,
                          const StepOptions& opts = {});

/// Per-tile upscaling: intrinsic pore averages of the ion densities and the
/// full-cell average of the potential, on the n x n macro grid.
MacroState cell_average(const MicroDomain& dom, const MicroState& state);

/// sum over pore voxels of (c+ - c-) * V  (the ionic charge in Omega).
double micro_ionic_charge(const MicroDomain& dom, const MicroState& state);

/// sum of r * sigma * area over all interface facets.
double micro_surface_charge(const MicroDomain& dom);

} // namespace pnph

#endif
