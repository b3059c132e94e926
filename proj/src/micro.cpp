#include "pnph/micro.hpp"

#include <cmath>
#include <string>

#include "pnph/errors.hpp"
#include "pnph/fvpoisson.hpp"
#include "pnph/transport.hpp"

namespace pnph {

MicroDomain build_perforated_domain(const ReferenceCell& cell, int n,
                                    const BoundarySpec& outer_bc,
                                    const MicroOptions& opts) {
  if (n < 1) throw ConfigError("build_perforated_domain: n must be >= 1");
  if (cell.dim() != 2)
    throw ConfigError("build_perforated_domain: the micro solver is 2D only");
  const StructuredGrid& cg = cell.grid();
  const index_t total =
      static_cast<index_t>(n) * cg.dims[0] * static_cast<index_t>(n) * cg.dims[1];
  if (total > opts.voxel_cap)
    throw ConfigError("build_perforated_domain: voxel count " + std::to_string(total) +
                      " exceeds the configured cap");

  MicroDomain dom;
  dom.tiles = n;
  dom.r = 1.0 / n;
  dom.epsilon = cell.epsilon();
  dom.alpha = cell.alpha();
  dom.outer_bc = outer_bc;
  dom.grid = StructuredGrid(2, {n * cg.dims[0], n * cg.dims[1], 1}, {1.0, 1.0, 1.0});
  const index_t nn = dom.grid.cell_count();
  dom.pore_mask.assign(static_cast<size_t>(nn), 0);
  for (index_t idx = 0; idx < nn; ++idx) {
    const auto c = dom.grid.coords(idx);
    const index_t src = cg.index(c[0] % cg.dims[0], c[1] % cg.dims[1], 0);
    dom.pore_mask[static_cast<size_t>(idx)] = cell.pore(src) ? 1 : 0;
  }
  dom.pore_cells = 0;
  for (auto v : dom.pore_mask) dom.pore_cells += v;

  // Interface facets of the tiled mask. Facets on the outer boundary belong
  // to the outer boundary condition, not to the interface.
  const double sigma = cell.sigma_uniform();
  for (index_t idx = 0; idx < nn; ++idx) {
    if (!dom.pore_mask[static_cast<size_t>(idx)]) continue;
    for (int axis = 0; axis < 2; ++axis) {
      for (int dir : {-1, +1}) {
        if (dom.grid.on_boundary(idx, axis, dir)) continue;
        const index_t nb = dom.grid.periodic_neighbor(idx, axis, dir);
        if (dom.pore_mask[static_cast<size_t>(nb)]) continue;
        InterfaceFacet f;
        f.cell = idx;
        f.axis = axis;
        f.dir = dir;
        f.area = dom.grid.face_area(axis);
        f.sigma = sigma;
        dom.facets.push_back(f);
      }
    }
  }

  // Pore components with non-periodic adjacency (Omega has a real boundary).
  dom.pore_component.assign(static_cast<size_t>(nn), -1);
  std::vector<index_t> stack;
  int label = 0;
  for (index_t seed = 0; seed < nn; ++seed) {
    if (!dom.pore_mask[static_cast<size_t>(seed)] ||
        dom.pore_component[static_cast<size_t>(seed)] >= 0)
      continue;
    stack.push_back(seed);
    dom.pore_component[static_cast<size_t>(seed)] = label;
    while (!stack.empty()) {
      const index_t cur = stack.back();
      stack.pop_back();
      for (int axis = 0; axis < 2; ++axis)
        for (int dir : {-1, +1}) {
          if (dom.grid.on_boundary(cur, axis, dir)) continue;
          const index_t nb = dom.grid.periodic_neighbor(cur, axis, dir);
          if (!dom.pore_mask[static_cast<size_t>(nb)]) continue;
          if (dom.pore_component[static_cast<size_t>(nb)] < 0) {
            dom.pore_component[static_cast<size_t>(nb)] = label;
            stack.push_back(nb);
          }
        }
    }
    ++label;
  }
  dom.component_count = label;
  return dom;
}

MicroState micro_neutral_state(const MicroDomain& dom, const Vec& salt) {
  const index_t nn = dom.grid.cell_count();
  if (static_cast<index_t>(salt.size()) != nn)
    throw ConfigError("micro_neutral_state: salt field size mismatch");
  std::vector<double> surface(static_cast<size_t>(dom.component_count), 0.0);
  std::vector<double> volume(static_cast<size_t>(dom.component_count), 0.0);
  for (const InterfaceFacet& f : dom.facets)
    surface[static_cast<size_t>(dom.pore_component[static_cast<size_t>(f.cell)])] +=
        dom.r * f.sigma * f.area;
  const double vol = dom.grid.cell_volume();
  for (index_t i = 0; i < nn; ++i)
    if (dom.pore_mask[static_cast<size_t>(i)])
      volume[static_cast<size_t>(dom.pore_component[static_cast<size_t>(i)])] += vol;
  MicroState s = micro_uniform_state(dom, 0.0, 0.0);
  for (index_t i = 0; i < nn; ++i) {
    if (!dom.pore_mask[static_cast<size_t>(i)]) continue;
    const int comp = dom.pore_component[static_cast<size_t>(i)];
    const double shift = -surface[static_cast<size_t>(comp)] /
                         (2.0 * volume[static_cast<size_t>(comp)]);
    s.c_plus[static_cast<size_t>(i)] = salt[static_cast<size_t>(i)] + shift;
    s.c_minus[static_cast<size_t>(i)] = salt[static_cast<size_t>(i)] - shift;
  }
  return s;
}

MicroState micro_uniform_state(const MicroDomain& dom, double c_plus, double c_minus) {
  MicroState s;
  const size_t n = static_cast<size_t>(dom.grid.cell_count());
  s.c_plus.assign(n, 0.0);
  s.c_minus.assign(n, 0.0);
  s.phi.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (dom.pore_mask[i]) {
      s.c_plus[i] = c_plus;
      s.c_minus[i] = c_minus;
    }
  }
  return s;
}

double micro_ionic_charge(const MicroDomain& dom, const MicroState& state) {
  double q = 0.0;
  for (size_t i = 0; i < state.c_plus.size(); ++i)
    if (dom.pore_mask[i]) q += state.c_plus[i] - state.c_minus[i];
  return q * dom.grid.cell_volume();
}

double micro_surface_charge(const MicroDomain& dom) {
  double q = 0.0;
  for (const InterfaceFacet& f : dom.facets) q += dom.r * f.sigma * f.area;
  return q;
}

namespace {

std::array<std::array<OuterFace, 2>, 3> micro_poisson_faces(const MicroDomain& dom) {
  std::array<std::array<OuterFace, 2>, 3> outer{};
  for (int a = 0; a < 2; ++a) {
    for (int s = 0; s < 2; ++s) {
      const FaceCondition& fc = dom.outer_bc.face[a][static_cast<size_t>(s)];
      OuterFace& of = outer[a][static_cast<size_t>(s)];
      if (fc.type == FaceConditionType::Dirichlet ||
          fc.type == FaceConditionType::Grounded) {
        of.kind = OuterFace::Dirichlet;
        of.value = fc.phi;
      } else {
        of.kind = OuterFace::NeumannFlux;
        of.value = 0.0;
      }
    }
  }
  for (int s = 0; s < 2; ++s) outer[2][static_cast<size_t>(s)].kind = OuterFace::NeumannFlux;
  return outer;
}

} // namespace

MicroState step_micro_pnp(const MicroDomain& dom, const MicroState& state, double dt,
                          const StepOptions& opts) {
  const StructuredGrid& g = dom.grid;
  const index_t n = g.cell_count();
  const double vol = g.cell_volume();
  const double eps2 = dom.epsilon * dom.epsilon;

  // Poisson: -div(eps(x/r) grad phi) = (c+ - c-) chi_pore + facet charges.
  Vec kappa(static_cast<size_t>(n), eps2);
  std::vector<std::uint8_t> active;
  if (dom.alpha > 0.0) {
    for (index_t i = 0; i < n; ++i)
      if (!dom.pore_mask[static_cast<size_t>(i)])
        kappa[static_cast<size_t>(i)] = dom.alpha;
  } else {
    active = dom.pore_mask;
  }
  FvPoisson poisson(g, std::move(kappa), std::move(active), {1.0, 1.0, 1.0},
                    micro_poisson_faces(dom));
  Vec rhs(static_cast<size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i)
    if (dom.pore_mask[static_cast<size_t>(i)])
      rhs[static_cast<size_t>(i)] =
          (state.c_plus[static_cast<size_t>(i)] - state.c_minus[static_cast<size_t>(i)]) * vol;
  // Surface charge attributed to the pore-side cell of each facet; the
  // discrete Gauss law balances ionic plus surface charge against the outer
  // boundary flux exactly.
  for (const InterfaceFacet& f : dom.facets)
    rhs[static_cast<size_t>(f.cell)] += dom.r * f.sigma * f.area;

  MicroState out = state;
  poisson.solve(rhs, out.phi, opts.linear_tol, opts.max_linear_iter,
                opts.poisson_compat_tol);

  // Blocking-wall species transport on the pore (micro D = M = 1).
  const std::array<double, 3> DM{1.0, 1.0, 1.0};
  TransportOperator plus_op(g, dom.pore_mask, out.phi, +1.0, DM, DM, 1.0, dt,
                            dom.outer_bc);
  TransportOperator minus_op(g, dom.pore_mask, out.phi, -1.0, DM, DM, 1.0, dt,
                             dom.outer_bc);
  plus_op.solve(state.c_plus, out.c_plus, opts.linear_tol, opts.max_linear_iter,
                opts.negative_guard);
  minus_op.solve(state.c_minus, out.c_minus, opts.linear_tol, opts.max_linear_iter,
                 opts.negative_guard);
  out.time = state.time + dt;
  return out;
}

MacroState cell_average(const MicroDomain& dom, const MicroState& state) {
  const int n = dom.tiles;
  const StructuredGrid& g = dom.grid;
  const int mx = g.dims[0] / n;
  const int my = g.dims[1] / n;
  if (mx * n != g.dims[0] || my * n != g.dims[1])
    throw ConfigError("cell_average: grid not divisible into tiles");

  MacroState macro;
  macro.grid = StructuredGrid(2, {n, n, 1}, {1.0, 1.0, 1.0});
  const size_t nn = static_cast<size_t>(macro.grid.cell_count());
  macro.c_plus.assign(nn, 0.0);
  macro.c_minus.assign(nn, 0.0);
  macro.phi.assign(nn, 0.0);
  macro.time = state.time;

  std::vector<double> pore_count(nn, 0.0);
  std::vector<double> cell_count(nn, 0.0);
  for (index_t idx = 0; idx < g.cell_count(); ++idx) {
    const auto c = g.coords(idx);
    const size_t tile =
        static_cast<size_t>(macro.grid.index(c[0] / mx, c[1] / my, 0));
    cell_count[tile] += 1.0;
    macro.phi[tile] += state.phi[static_cast<size_t>(idx)];
    if (dom.pore_mask[static_cast<size_t>(idx)]) {
      pore_count[tile] += 1.0;
      macro.c_plus[tile] += state.c_plus[static_cast<size_t>(idx)];
      macro.c_minus[tile] += state.c_minus[static_cast<size_t>(idx)];
    }
  }
  for (size_t i = 0; i < nn; ++i) {
    macro.phi[i] /= cell_count[i];
    if (pore_count[i] > 0.0) {
      macro.c_plus[i] /= pore_count[i];
      macro.c_minus[i] /= pore_count[i];
    }
  }
  return macro;
}

} // namespace pnph
