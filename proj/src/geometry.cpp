#include "pnph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace pnph {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int get_int_param(const std::map<std::string, double>& params, const std::string& key,
                  int fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  const int n = static_cast<int>(std::lround(v));
  if (std::abs(v - n) > 1e-9) throw ConfigError("parameter '" + key + "' must be an integer");
  return n;
}

} // namespace

ReferenceCell::ReferenceCell(
    StructuredGrid grid, std::vector<std::uint8_t> phase, double sigma_uniform,
    double epsilon, double alpha,
    const std::function<double(const std::array<double, 3>&, int)>* facet_area_scale,
    const std::function<double(index_t, int, int, double)>* facet_sigma)
    : grid_(grid), phase_(std::move(phase)), sigma_uniform_(sigma_uniform),
      epsilon_(epsilon), alpha_(alpha) {
  const index_t n = grid_.cell_count();
  if (static_cast<index_t>(phase_.size()) != n)
    throw ConfigError("phase mask size does not match grid");
  for (int a = 0; a < grid_.dim; ++a)
    if (grid_.dims[a] < 2) throw ConfigError("reference cell dims must be >= 2 per axis");
  if (epsilon_ <= 0.0) throw ConfigError("epsilon must be positive");
  if (alpha_ < 0.0) throw ConfigError("alpha must be nonnegative");
  for (std::uint8_t v : phase_)
    if (v > 1) throw ConfigError("phase entries must be 0 (solid) or 1 (pore)");

  pore_count_ = static_cast<index_t>(std::count(phase_.begin(), phase_.end(), std::uint8_t(1)));
  if (pore_count_ == 0) throw ConfigError("reference cell has empty pore phase");
  if (pore_count_ == n) throw ConfigError("reference cell has empty solid phase");

  // Interface facets, periodic adjacency included.
  for (index_t idx = 0; idx < n; ++idx) {
    if (!pore(idx)) continue;
    for (int axis = 0; axis < grid_.dim; ++axis) {
      for (int dir : {-1, +1}) {
        const index_t nb = grid_.periodic_neighbor(idx, axis, dir);
        if (pore(nb)) continue;
        InterfaceFacet f;
        f.cell = idx;
        f.axis = axis;
        f.dir = dir;
        f.area = grid_.face_area(axis);
        f.sigma = sigma_uniform_;
        if (facet_area_scale) {
          const auto c = grid_.coords(idx);
          std::array<double, 3> centroid{0.0, 0.0, 0.0};
          for (int a = 0; a < grid_.dim; ++a) centroid[a] = grid_.center(a, c[a]);
          centroid[axis] += 0.5 * dir * grid_.spacing(axis);
          f.area *= (*facet_area_scale)(centroid, axis);
        }
        if (facet_sigma) f.sigma = (*facet_sigma)(idx, axis, dir, f.sigma);
        facets_.push_back(f);
      }
    }
  }

  // Pore connectivity (periodic): component labels plus wrap detection.
  component_.assign(static_cast<size_t>(n), -1);
  std::vector<index_t> stack;
  int label = 0;
  std::array<bool, 3> wrap_edge{false, false, false};
  for (index_t seed = 0; seed < n; ++seed) {
    if (!pore(seed) || component_[static_cast<size_t>(seed)] >= 0) continue;
    std::array<bool, 3> comp_wrap{false, false, false};
    stack.push_back(seed);
    component_[static_cast<size_t>(seed)] = label;
    while (!stack.empty()) {
      const index_t cur = stack.back();
      stack.pop_back();
      for (int axis = 0; axis < grid_.dim; ++axis) {
        for (int dir : {-1, +1}) {
          const index_t nb = grid_.periodic_neighbor(cur, axis, dir);
          if (!pore(nb)) continue;
          if (grid_.on_boundary(cur, axis, dir)) comp_wrap[axis] = true;
          if (component_[static_cast<size_t>(nb)] < 0) {
            component_[static_cast<size_t>(nb)] = label;
            stack.push_back(nb);
          }
        }
      }
    }
    for (int a = 0; a < 3; ++a) wrap_edge[a] = wrap_edge[a] || comp_wrap[a];
    ++label;
  }
  component_count_ = label;
  for (int a = 0; a < grid_.dim; ++a) percolates_[a] = wrap_edge[a];
  connectivity_warning_ = true;
  for (int a = 0; a < grid_.dim; ++a)
    if (percolates_[a]) connectivity_warning_ = false;
}

double porosity(const ReferenceCell& cell) {
  return static_cast<double>(cell.pore_count()) /
         static_cast<double>(cell.grid().cell_count());
}

double homogenized_surface_charge(const ReferenceCell& cell) {
  double total = 0.0;
  for (const InterfaceFacet& f : cell.facets()) total += f.sigma * f.area;
  return total / cell.grid().volume();
}

namespace {

ReferenceCell build_straight_channel(int dim, const std::map<std::string, double>& params) {
  const double p = get_param(params, "porosity", 0.5);
  const int n = get_int_param(params, "n", 64);
  const double offset = get_param(params, "offset", 0.0);
  if (p <= 0.0 || p >= 1.0) throw ConfigError("straight channel porosity must be in (0,1)");
  const int m = static_cast<int>(std::lround(p * n));
  if (m < 1 || m >= n)
    throw ConfigError("straight channel: porosity*n must leave both phases nonempty");
  const int j0 = static_cast<int>(std::lround(offset * n));
  StructuredGrid g(dim, {n, n, dim == 3 ? n : 1}, {1.0, 1.0, 1.0});
  std::vector<std::uint8_t> phase(static_cast<size_t>(g.cell_count()), 0);
  // Pore slab offset <= y2 < offset + p; transport free along y1 (and y3 in 3D).
  for (index_t idx = 0; idx < g.cell_count(); ++idx) {
    const auto c = g.coords(idx);
    const int jj = (c[1] - j0 % n + n) % n;
    phase[static_cast<size_t>(idx)] = (jj < m) ? 1 : 0;
  }
  return ReferenceCell(g, std::move(phase), get_param(params, "sigma", 0.0),
                       get_param(params, "epsilon", 0.1), get_param(params, "alpha", 0.0));
}

ReferenceCell build_perturbed_channel(const std::map<std::string, double>& params) {
  const int n = get_int_param(params, "n", 32);
  const double height = get_param(params, "height", 0.6875);
  const double depth = get_param(params, "notch_depth", 0.5625);
  const double width = get_param(params, "notch_width", 0.375);
  if (height <= 0.0 || height >= 1.0) throw ConfigError("perturbed channel: height in (0,1)");
  if (depth < 0.0 || depth >= height)
    throw ConfigError("perturbed channel: notch_depth must be in [0, height)");
  if (width < 0.0 || width >= 1.0) throw ConfigError("perturbed channel: notch_width in [0,1)");
  StructuredGrid g(3, {n, n, n}, {1.0, 1.0, 1.0});
  std::vector<std::uint8_t> phase(static_cast<size_t>(g.cell_count()), 0);
  // Channel along y1 of height `height`, constricted to height-depth over a
  // band of length `width` centered at y1 = 1/2; invariant along y3.
  for (index_t idx = 0; idx < g.cell_count(); ++idx) {
    const auto c = g.coords(idx);
    const double y1 = g.center(0, c[0]);
    const double y2 = g.center(1, c[1]);
    const bool in_notch_band = std::abs(y1 - 0.5) < 0.5 * width;
    const double local_height = in_notch_band ? height - depth : height;
    phase[static_cast<size_t>(idx)] = (y2 < local_height) ? 1 : 0;
  }
  return ReferenceCell(g, std::move(phase), get_param(params, "sigma", 0.0),
                       get_param(params, "epsilon", 0.1), get_param(params, "alpha", 0.0));
}

ReferenceCell build_rectangle_pore(const std::map<std::string, double>& params) {
  const double a = get_param(params, "a", 1.0);
  const double b = get_param(params, "b", a);
  if (a <= 0.0 || b <= 0.0) throw ConfigError("rectangle pore sides must be positive");
  const double L = get_param(params, "cell_length", 2.0 * std::max(a, b));
  const int n = get_int_param(params, "n", 64);
  if (a >= L || b >= L) throw ConfigError("rectangle pore must fit inside the cell");
  StructuredGrid g(2, {n, n, 1}, {L, L, 1.0});
  std::vector<std::uint8_t> phase(static_cast<size_t>(g.cell_count()), 0);
  for (index_t idx = 0; idx < g.cell_count(); ++idx) {
    const auto c = g.coords(idx);
    const double x = g.center(0, c[0]);
    const double y = g.center(1, c[1]);
    const bool inside = std::abs(x - 0.5 * L) < 0.5 * a && std::abs(y - 0.5 * L) < 0.5 * b;
    phase[static_cast<size_t>(idx)] = inside ? 1 : 0;
  }
  return ReferenceCell(g, std::move(phase), get_param(params, "sigma", 0.0),
                       get_param(params, "epsilon", 0.1), get_param(params, "alpha", 0.0));
}

ReferenceCell build_circular_inclusion(const std::map<std::string, double>& params) {
  const double R = get_param(params, "radius", 0.3);
  const int n = get_int_param(params, "n", 64);
  if (R <= 0.0 || R >= 0.5) throw ConfigError("circular inclusion radius must be in (0, 0.5)");
  StructuredGrid g(2, {n, n, 1}, {1.0, 1.0, 1.0});
  std::vector<std::uint8_t> phase(static_cast<size_t>(g.cell_count()), 0);
  const double cx = 0.5, cy = 0.5;
  for (index_t idx = 0; idx < g.cell_count(); ++idx) {
    const auto c = g.coords(idx);
    const double dx = g.center(0, c[0]) - cx;
    const double dy = g.center(1, c[1]) - cy;
    phase[static_cast<size_t>(idx)] = (dx * dx + dy * dy < R * R) ? 0 : 1;
  }
  // Staircase facet areas projected onto the analytic circle normal so that
  // the facet measure converges to the true perimeter at first order.
  std::function<double(const std::array<double, 3>&, int)> scale =
      [cx, cy](const std::array<double, 3>& centroid, int axis) {
        const double dx = centroid[0] - cx;
        const double dy = centroid[1] - cy;
        const double r = std::sqrt(dx * dx + dy * dy);
        if (r == 0.0) return 1.0;
        return axis == 0 ? std::abs(dx) / r : std::abs(dy) / r;
      };
  return ReferenceCell(g, std::move(phase), get_param(params, "sigma", 0.0),
                       get_param(params, "epsilon", 0.1), get_param(params, "alpha", 0.0),
                       &scale);
}

} // namespace

std::vector<std::string> preset_names() {
  return {"straight_channel_2d", "straight_channel_3d", "perturbed_channel_3d",
          "rectangle_pore_2d", "circular_inclusion_2d"};
}

ReferenceCell build_preset(const std::string& name,
                           const std::map<std::string, double>& params) {
  if (name == "straight_channel_2d") return build_straight_channel(2, params);
  if (name == "straight_channel_3d") return build_straight_channel(3, params);
  if (name == "perturbed_channel_3d") return build_perturbed_channel(params);
  if (name == "rectangle_pore_2d") return build_rectangle_pore(params);
  if (name == "circular_inclusion_2d") return build_circular_inclusion(params);
  throw ConfigError("unknown preset id: " + name);
}

ReferenceCell load_raster(const std::string& path, double epsilon, double alpha) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open raster file: " + path);
  int d = 0;
  if (!(in >> d) || d < 2 || d > 3) throw ConfigError("raster header: bad dimension");
  std::array<int, 3> dims{1, 1, 1};
  for (int a = 0; a < d; ++a)
    if (!(in >> dims[a]) || dims[a] < 2) throw ConfigError("raster header: bad dims");
  std::string tag;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  if (!(in >> tag) || tag != "lengths") throw ConfigError("raster header: expected 'lengths'");
  for (int a = 0; a < d; ++a)
    if (!(in >> lengths[a]) || lengths[a] <= 0.0)
      throw ConfigError("raster header: bad lengths");
  double sigma = 0.0;
  if (!(in >> tag) || tag != "sigma") throw ConfigError("raster header: expected 'sigma'");
  if (!(in >> sigma)) throw ConfigError("raster header: bad sigma value");

  StructuredGrid g(d, dims, lengths);
  const index_t n = g.cell_count();
  std::vector<std::uint8_t> phase(static_cast<size_t>(n), 0);
  for (index_t i = 0; i < n; ++i) {
    int v = 0;
    if (!(in >> v)) throw ConfigError("raster: phase entry count does not match dims");
    if (v != 0 && v != 1) throw ConfigError("raster: phase entries must be 0 or 1");
    phase[static_cast<size_t>(i)] = static_cast<std::uint8_t>(v);
  }
  // Optional per-facet sigma table: "facet_sigma <m>" then rows "cell axis dir sigma".
  std::vector<std::array<double, 4>> table;
  if (in >> tag) {
    if (tag == "facet_sigma") {
      long m = 0;
      if (!(in >> m) || m < 0) throw ConfigError("raster: bad facet_sigma count");
      table.resize(static_cast<size_t>(m));
      for (auto& row : table)
        if (!(in >> row[0] >> row[1] >> row[2] >> row[3]))
          throw ConfigError("raster: truncated facet_sigma table");
    } else {
      throw ConfigError("raster: trailing content after phase entries");
    }
  }
  if (!table.empty()) {
    size_t used = 0;
    std::function<double(index_t, int, int, double)> lookup =
        [&table, &used](index_t cell, int axis, int dir, double fallback) {
          for (const auto& row : table)
            if (static_cast<index_t>(row[0]) == cell &&
                static_cast<int>(row[1]) == axis && static_cast<int>(row[2]) == dir) {
              ++used;
              return row[3];
            }
          return fallback;
        };
    ReferenceCell cell(g, std::move(phase), sigma, epsilon, alpha, nullptr, &lookup);
    if (used < table.size())
      throw ConfigError("raster: facet_sigma row does not match an interface facet");
    return cell;
  }
  return ReferenceCell(g, std::move(phase), sigma, epsilon, alpha);
}

void save_raster(const ReferenceCell& cell, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write raster file: " + path);
  const StructuredGrid& g = cell.grid();
  out << g.dim;
  for (int a = 0; a < g.dim; ++a) out << ' ' << g.dims[a];
  out << '\n' << "lengths";
  for (int a = 0; a < g.dim; ++a) out << ' ' << g.lengths[a];
  out << '\n' << "sigma " << cell.sigma_uniform() << '\n';
  const index_t n = g.cell_count();
  for (index_t i = 0; i < n; ++i) {
    out << (cell.pore(i) ? 1 : 0);
    out << (((i + 1) % g.dims[0] == 0) ? '\n' : ' ');
  }
}

} // namespace pnph
