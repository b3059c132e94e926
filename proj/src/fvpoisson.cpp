#include "pnph/fvpoisson.hpp"

#include <cmath>
#include <string>

#include "pnph/errors.hpp"

namespace pnph {

namespace {
inline double harmonic(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}
} // namespace

FvPoisson::FvPoisson(const StructuredGrid& grid, Vec kappa,
                     std::vector<std::uint8_t> active, std::array<double, 3> axis_mult,
                     std::array<std::array<OuterFace, 2>, 3> outer,
                     bool interface_dirichlet, Vec mass_diag)
    : grid_(&grid), kappa_(std::move(kappa)), active_(std::move(active)),
      axis_mult_(axis_mult), outer_(outer), interface_dirichlet_(interface_dirichlet),
      mass_diag_(std::move(mass_diag)) {
  const size_t n = static_cast<size_t>(grid.cell_count());
  if (kappa_.empty()) kappa_.assign(n, 1.0);
  if (kappa_.size() != n) throw ConfigError("FvPoisson: kappa size mismatch");
  if (active_.empty()) active_.assign(n, 1);
  if (active_.size() != n) throw ConfigError("FvPoisson: mask size mismatch");
  if (!mass_diag_.empty() && mass_diag_.size() != n)
    throw ConfigError("FvPoisson: mass size mismatch");
  build();
}

FvPoisson FvPoisson::periodic(const StructuredGrid& grid, Vec kappa,
                              std::vector<std::uint8_t> active) {
  std::array<std::array<OuterFace, 2>, 3> outer{};
  return FvPoisson(grid, std::move(kappa), std::move(active), {1.0, 1.0, 1.0}, outer);
}

void FvPoisson::build() {
  const StructuredGrid& g = *grid_;
  const index_t n = g.cell_count();
  diag_.assign(static_cast<size_t>(n), 0.0);
  Vec dirichlet_diag(static_cast<size_t>(n), 0.0);
  rhs_bc_.assign(static_cast<size_t>(n), 0.0);
  for (int a = 0; a < 3; ++a) {
    nbp_[a].assign(static_cast<size_t>(n), -1);
    tp_[a].assign(static_cast<size_t>(n), 0.0);
  }
  active_count_ = 0;
  for (index_t i = 0; i < n; ++i)
    if (active_[static_cast<size_t>(i)]) ++active_count_;
  if (active_count_ == 0) throw ConfigError("FvPoisson: empty active set");

  for (int axis = 0; axis < g.dim; ++axis) {
    const double A = g.face_area(axis);
    const double h = g.spacing(axis);
    const double mult = axis_mult_[axis];
    if (mult == 0.0) continue;  // blocked axis: no coupling
    for (index_t i = 0; i < n; ++i) {
      if (!active_[static_cast<size_t>(i)]) continue;
      const double ki = kappa_[static_cast<size_t>(i)];
      // +face
      if (g.on_boundary(i, axis, +1) && outer_[axis][1].kind != OuterFace::Periodic) {
        if (outer_[axis][1].kind == OuterFace::Dirichlet) {
          const double t = mult * ki * A / (0.5 * h);
          diag_[static_cast<size_t>(i)] += t;
          dirichlet_diag[static_cast<size_t>(i)] += t;
          rhs_bc_[static_cast<size_t>(i)] += t * outer_[axis][1].value;
        } else {
          rhs_bc_[static_cast<size_t>(i)] -= outer_[axis][1].value * A;
        }
      } else {
        const index_t j = g.periodic_neighbor(i, axis, +1);
        if (active_[static_cast<size_t>(j)]) {
          const double t = mult * harmonic(ki, kappa_[static_cast<size_t>(j)]) * A / h;
          nbp_[axis][static_cast<size_t>(i)] = j;
          tp_[axis][static_cast<size_t>(i)] = t;
          diag_[static_cast<size_t>(i)] += t;
          diag_[static_cast<size_t>(j)] += t;
        } else if (interface_dirichlet_) {
          const double t = mult * ki * A / (0.5 * h);
          diag_[static_cast<size_t>(i)] += t;
          dirichlet_diag[static_cast<size_t>(i)] += t;
        }
      }
      // -face: only boundary/interface handling (interior faces are covered
      // as the +face of the lower neighbor).
      if (g.on_boundary(i, axis, -1) && outer_[axis][0].kind != OuterFace::Periodic) {
        if (outer_[axis][0].kind == OuterFace::Dirichlet) {
          const double t = mult * ki * A / (0.5 * h);
          diag_[static_cast<size_t>(i)] += t;
          dirichlet_diag[static_cast<size_t>(i)] += t;
          rhs_bc_[static_cast<size_t>(i)] += t * outer_[axis][0].value;
        } else {
          rhs_bc_[static_cast<size_t>(i)] -= outer_[axis][0].value * A;
        }
      } else {
        const index_t j = g.periodic_neighbor(i, axis, -1);
        if (!active_[static_cast<size_t>(j)] && interface_dirichlet_) {
          const double t = mult * ki * A / (0.5 * h);
          diag_[static_cast<size_t>(i)] += t;
          dirichlet_diag[static_cast<size_t>(i)] += t;
        }
      }
    }
  }

  // Connected components of the active set through nonzero transmissibilities.
  comp_.assign(static_cast<size_t>(n), -1);
  std::vector<index_t> stack;
  ncomp_ = 0;
  for (index_t seed = 0; seed < n; ++seed) {
    if (!active_[static_cast<size_t>(seed)] || comp_[static_cast<size_t>(seed)] >= 0)
      continue;
    stack.push_back(seed);
    comp_[static_cast<size_t>(seed)] = ncomp_;
    while (!stack.empty()) {
      const index_t cur = stack.back();
      stack.pop_back();
      for (int axis = 0; axis < g.dim; ++axis) {
        const index_t jp = nbp_[axis][static_cast<size_t>(cur)];
        if (jp >= 0 && tp_[axis][static_cast<size_t>(cur)] > 0.0 &&
            comp_[static_cast<size_t>(jp)] < 0) {
          comp_[static_cast<size_t>(jp)] = ncomp_;
          stack.push_back(jp);
        }
        // reverse: find cells whose +neighbor is cur
        const index_t jm = g.periodic_neighbor(cur, axis, -1);
        if (jm >= 0 && nbp_[axis][static_cast<size_t>(jm)] == cur &&
            tp_[axis][static_cast<size_t>(jm)] > 0.0 &&
            comp_[static_cast<size_t>(jm)] < 0) {
          comp_[static_cast<size_t>(jm)] = ncomp_;
          stack.push_back(jm);
        }
      }
    }
    ++ncomp_;
  }
  if (!mass_diag_.empty()) {
    for (index_t i = 0; i < n; ++i) {
      if (!active_[static_cast<size_t>(i)]) continue;
      const double m = mass_diag_[static_cast<size_t>(i)];
      if (m < 0.0) throw ConfigError("FvPoisson: mass term must be nonnegative");
      diag_[static_cast<size_t>(i)] += m;
      dirichlet_diag[static_cast<size_t>(i)] += m;
    }
  }

  // A component is floating when no cell in it carries a Dirichlet-type
  // diagonal excess (the operator is singular there).
  comp_floating_.assign(static_cast<size_t>(ncomp_), 1);
  for (index_t i = 0; i < n; ++i) {
    if (!active_[static_cast<size_t>(i)]) continue;
    if (dirichlet_diag[static_cast<size_t>(i)] > 0.0)
      comp_floating_[static_cast<size_t>(comp_[static_cast<size_t>(i)])] = 0;
  }
  floating_count_ = 0;
  for (std::uint8_t f : comp_floating_) floating_count_ += f;
}

void FvPoisson::apply(const Vec& u, Vec& out) const {
  const StructuredGrid& g = *grid_;
  const index_t n = g.cell_count();
  out.assign(static_cast<size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i) {
    if (active_[static_cast<size_t>(i)])
      out[static_cast<size_t>(i)] = diag_[static_cast<size_t>(i)] * u[static_cast<size_t>(i)];
  }
  for (int axis = 0; axis < g.dim; ++axis) {
    const Vec& t = tp_[axis];
    const std::vector<index_t>& nb = nbp_[axis];
    for (index_t i = 0; i < n; ++i) {
      const double tf = t[static_cast<size_t>(i)];
      if (tf == 0.0) continue;
      const index_t j = nb[static_cast<size_t>(i)];
      out[static_cast<size_t>(i)] -= tf * u[static_cast<size_t>(j)];
      out[static_cast<size_t>(j)] -= tf * u[static_cast<size_t>(i)];
    }
  }
}

double FvPoisson::energy(const Vec& u, const Vec& v) const {
  Vec av;
  apply(v, av);
  double s = 0.0;
  for (size_t i = 0; i < av.size(); ++i)
    if (active_[i]) s += u[i] * av[i];
  return s;
}

void FvPoisson::project_floating(Vec& v) const {
  if (floating_count_ == 0) return;
  std::vector<double> sum(static_cast<size_t>(ncomp_), 0.0);
  std::vector<double> cnt(static_cast<size_t>(ncomp_), 0.0);
  for (size_t i = 0; i < v.size(); ++i) {
    if (!active_[i]) continue;
    sum[static_cast<size_t>(comp_[i])] += v[i];
    cnt[static_cast<size_t>(comp_[i])] += 1.0;
  }
  for (size_t i = 0; i < v.size(); ++i) {
    if (!active_[i]) continue;
    const int c = comp_[i];
    if (comp_floating_[static_cast<size_t>(c)])
      v[i] -= sum[static_cast<size_t>(c)] / cnt[static_cast<size_t>(c)];
  }
}

IterStats FvPoisson::solve(const Vec& rhs, Vec& u, double tol, int max_iter,
                           double compat_tol) const {
  const size_t n = static_cast<size_t>(grid_->cell_count());
  Vec b(n, 0.0);
  double scale = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!active_[i]) continue;
    b[i] = rhs[i] + rhs_bc_[i];
    scale += std::abs(b[i]);
  }
  // Compatibility on floating components: mean of the data must vanish.
  if (floating_count_ > 0) {
    std::vector<double> sum(static_cast<size_t>(ncomp_), 0.0);
    std::vector<double> cnt(static_cast<size_t>(ncomp_), 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (!active_[i]) continue;
      sum[static_cast<size_t>(comp_[i])] += b[i];
      cnt[static_cast<size_t>(comp_[i])] += 1.0;
    }
    for (int c = 0; c < ncomp_; ++c) {
      if (!comp_floating_[static_cast<size_t>(c)]) continue;
      const double mean = sum[static_cast<size_t>(c)] / cnt[static_cast<size_t>(c)];
      if (std::abs(mean) > compat_tol * std::max(1.0, scale / static_cast<double>(n)))
        throw SolverError("elliptic solve: incompatible right-hand side on a floating "
                          "component (mean = " + std::to_string(mean) + ")");
    }
    Vec tmp = b;
    project_floating(tmp);
    b = tmp;
  }

  if (u.size() != n) u.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    if (!active_[i]) u[i] = 0.0;

  const Vec& d = diag_;
  const std::vector<std::uint8_t>& act = active_;
  auto apply_op = [this](const Vec& x, Vec& y) { this->apply(x, y); };
  auto precond = [&d, &act](const Vec& r, Vec& z) {
    if (z.size() != r.size()) z.assign(r.size(), 0.0);
    for (size_t i = 0; i < r.size(); ++i)
      z[i] = (act[i] && d[i] > 0.0) ? r[i] / d[i] : 0.0;
  };
  IterStats st = cg_solve(apply_op, precond, b, u, tol, max_iter);
  project_floating(u);
  if (!st.converged)
    throw SolverError("elliptic solve: CG did not converge within " +
                      std::to_string(max_iter) +
                      " iterations (residual = " + std::to_string(st.residual) + ")");
  return st;
}

} // namespace pnph
