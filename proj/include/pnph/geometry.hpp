#ifndef PNPH_GEOMETRY_HPP
#define PNPH_GEOMETRY_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pnph/structured.hpp"

namespace pnph {

enum class Phase : std::uint8_t { Solid = 0, Pore = 1 };

/// One face of the discrete pore-solid interface. The normal points from the
/// pore voxel into the adjacent solid voxel; `area` defaults to the raw voxel
/// face measure and may carry a normal-projection correction for presets with
/// curved analytic interfaces.
struct InterfaceFacet {
  index_t cell = 0;  // pore-side voxel
  int axis = 0;
  int dir = +1;      // -1 or +1 along axis
  double area = 0.0;
  double sigma = 0.0;
};

/// Periodic voxelized reference cell Y = Y_pore u Y_solid with surface charge
/// on the interface facets. Immutable after construction; safe for concurrent
/// reads.
class ReferenceCell {
public:
  /// `facet_area_scale`, when given, multiplies each facet's raw area; used by
  /// presets that know the analytic interface normal. `facet_sigma`, when
  /// given, overrides the uniform sigma per facet (raster per-facet tables).
  ReferenceCell(StructuredGrid grid, std::vector<std::uint8_t> phase,
                double sigma_uniform, double epsilon, double alpha,
                const std::function<double(const std::array<double, 3>&, int)>*
                    facet_area_scale = nullptr,
                const std::function<double(index_t, int, int, double)>* facet_sigma =
                    nullptr);

  const StructuredGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  bool pore(index_t idx) const { return phase_[static_cast<size_t>(idx)] != 0; }
  const std::vector<std::uint8_t>& phase() const { return phase_; }
  const std::vector<InterfaceFacet>& facets() const { return facets_; }
  double epsilon() const { return epsilon_; }
  double alpha() const { return alpha_; }
  double sigma_uniform() const { return sigma_uniform_; }
  index_t pore_count() const { return pore_count_; }

  /// True if some pore component wraps around the cell along `axis`.
  bool percolates(int axis) const { return percolates_[axis]; }
  /// Set when the pore phase does not percolate along any axis.
  bool connectivity_warning() const { return connectivity_warning_; }

  /// Connected-component label per voxel (-1 on solid), periodic adjacency.
  const std::vector<int>& pore_components() const { return component_; }
  int pore_component_count() const { return component_count_; }

private:
  StructuredGrid grid_;
  std::vector<std::uint8_t> phase_;
  double sigma_uniform_;
  double epsilon_;
  double alpha_;
  std::vector<InterfaceFacet> facets_;
  index_t pore_count_ = 0;
  std::array<bool, 3> percolates_{false, false, false};
  bool connectivity_warning_ = false;
  std::vector<int> component_;
  int component_count_ = 0;
};

/// Pore volume fraction |Y_pore| / |Y|.
double porosity(const ReferenceCell& cell);

/// rho_s = (1/|Y|) * sum over interface facets of sigma * facet area.
double homogenized_surface_charge(const ReferenceCell& cell);

/// Named geometries. Recognized presets:
///   straight_channel_2d   (porosity, n, sigma, epsilon, alpha)
///   straight_channel_3d   (porosity, n, sigma, epsilon, alpha)
///   perturbed_channel_3d  (n, height, notch_depth, notch_width, sigma, epsilon, alpha)
///   rectangle_pore_2d     (a, b, cell_length, n, sigma, epsilon, alpha)
///   circular_inclusion_2d (radius, n, sigma, epsilon, alpha)
ReferenceCell build_preset(const std::string& name,
                           const std::map<std::string, double>& params);

std::vector<std::string> preset_names();

/// Plain-text raster exchange format; see README for the exact layout.
ReferenceCell load_raster(const std::string& path, double epsilon = 0.1,
                          double alpha = 0.0);
void save_raster(const ReferenceCell& cell, const std::string& path);

} // namespace pnph

#endif
