#include "pnph/transport.hpp"

#include <cmath>
#include <string>

#include "pnph/errors.hpp"
#include "pnph/scheme.hpp"

namespace pnph {

double species_dirichlet_value(const FaceCondition& fc, double z) {
  return z > 0 ? fc.c_plus : fc.c_minus;
}

TransportOperator::TransportOperator(const StructuredGrid& g,
                                     std::vector<std::uint8_t> mask, const Vec& phi,
                                     double z, const std::array<double, 3>& D,
                                     const std::array<double, 3>& M, double p, double dt,
                                     const BoundarySpec& bc)
    : grid_(&g), mask_(std::move(mask)) {
  const index_t n = g.cell_count();
  if (mask_.empty()) mask_.assign(static_cast<size_t>(n), 1);
  if (dt <= 0.0) throw ConfigError("transport step: dt must be positive");
  if (p <= 0.0) throw ConfigError("transport step: porosity must be positive");
  pv_dt_ = p * g.cell_volume() / dt;
  diag_bc_.assign(static_cast<size_t>(n), 0.0);
  rhs_bc_.assign(static_cast<size_t>(n), 0.0);
  diag_.assign(static_cast<size_t>(n), 0.0);
  for (int a = 0; a < 3; ++a) {
    fa_[a].assign(static_cast<size_t>(n), 0.0);
    fb_[a].assign(static_cast<size_t>(n), 0.0);
    nbp_[a].assign(static_cast<size_t>(n), -1);
  }

  for (int axis = 0; axis < g.dim; ++axis) {
    const double Da = D[axis];
    const double Ma = M[axis];
    if (Da <= 1e-14) {
      // Blocked axis: the stencil omits this direction entirely.
      if (std::abs(Ma) > 1e-12)
        throw ConfigError("transport step: mobility on a blocked axis");
      continue;
    }
    const double A = g.face_area(axis);
    const double h = g.spacing(axis);
    const double T = Da * A / h;
    const double drift_ratio = z * Ma / Da;
    for (index_t i = 0; i < n; ++i) {
      if (!mask_[static_cast<size_t>(i)]) continue;
      // +face: interior coupling or outer boundary closure.
      if (!g.on_boundary(i, axis, +1)) {
        const index_t j = g.periodic_neighbor(i, axis, +1);
        if (mask_[static_cast<size_t>(j)]) {
          const double delta =
              drift_ratio * (phi[static_cast<size_t>(j)] - phi[static_cast<size_t>(i)]);
          nbp_[axis][static_cast<size_t>(i)] = j;
          fa_[axis][static_cast<size_t>(i)] = T * bernoulli(delta);
          fb_[axis][static_cast<size_t>(i)] = T * bernoulli(-delta);
        }
      }
      for (int side : {0, 1}) {
        if (!g.on_boundary(i, axis, side == 0 ? -1 : +1)) continue;
        const FaceCondition& fc = bc.face[axis][static_cast<size_t>(side)];
        if (fc.type == FaceConditionType::Dirichlet) {
          const double Tb = Da * A / (0.5 * h);
          const double delta = drift_ratio * (fc.phi - phi[static_cast<size_t>(i)]);
          diag_bc_[static_cast<size_t>(i)] += Tb * bernoulli(delta);
          rhs_bc_[static_cast<size_t>(i)] +=
              Tb * bernoulli(-delta) * species_dirichlet_value(fc, z);
        } else if (fc.type == FaceConditionType::AppliedCurrent) {
          rhs_bc_[static_cast<size_t>(i)] -= z * fc.current * A;
        }
        // NoFlux and Grounded: blocking wall, no species closure.
      }
    }
  }

  for (index_t i = 0; i < n; ++i) {
    if (!mask_[static_cast<size_t>(i)]) continue;
    diag_[static_cast<size_t>(i)] = pv_dt_ + diag_bc_[static_cast<size_t>(i)];
  }
  for (int axis = 0; axis < g.dim; ++axis) {
    for (index_t i = 0; i < n; ++i) {
      const index_t j = nbp_[axis][static_cast<size_t>(i)];
      if (j < 0) continue;
      diag_[static_cast<size_t>(i)] += fa_[axis][static_cast<size_t>(i)];
      diag_[static_cast<size_t>(j)] += fb_[axis][static_cast<size_t>(i)];
    }
  }
}

void TransportOperator::apply(const Vec& x, Vec& y) const {
  const index_t n = grid_->cell_count();
  y.assign(static_cast<size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i) {
    if (!mask_[static_cast<size_t>(i)]) continue;
    y[static_cast<size_t>(i)] =
        (pv_dt_ + diag_bc_[static_cast<size_t>(i)]) * x[static_cast<size_t>(i)];
  }
  for (int axis = 0; axis < grid_->dim; ++axis) {
    const Vec& fa = fa_[axis];
    const Vec& fb = fb_[axis];
    const std::vector<index_t>& nb = nbp_[axis];
    for (index_t i = 0; i < n; ++i) {
      const index_t j = nb[static_cast<size_t>(i)];
      if (j < 0) continue;
      const double f =
          fa[static_cast<size_t>(i)] * x[static_cast<size_t>(i)] -
          fb[static_cast<size_t>(i)] * x[static_cast<size_t>(j)];
      y[static_cast<size_t>(i)] += f;
      y[static_cast<size_t>(j)] -= f;
    }
  }
}

Vec TransportOperator::rhs(const Vec& c_old, const Vec* extra) const {
  const index_t n = grid_->cell_count();
  Vec b(static_cast<size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i) {
    if (!mask_[static_cast<size_t>(i)]) continue;
    b[static_cast<size_t>(i)] = pv_dt_ * c_old[static_cast<size_t>(i)] +
                                rhs_bc_[static_cast<size_t>(i)];
    if (extra) b[static_cast<size_t>(i)] += (*extra)[static_cast<size_t>(i)];
  }
  return b;
}

Vec TransportOperator::flux_divergence(const Vec& c) const {
  const index_t n = grid_->cell_count();
  Vec y(static_cast<size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i) {
    if (!mask_[static_cast<size_t>(i)]) continue;
    y[static_cast<size_t>(i)] =
        diag_bc_[static_cast<size_t>(i)] * c[static_cast<size_t>(i)] -
        rhs_bc_[static_cast<size_t>(i)];
  }
  for (int axis = 0; axis < grid_->dim; ++axis) {
    for (index_t i = 0; i < n; ++i) {
      const index_t j = nbp_[axis][static_cast<size_t>(i)];
      if (j < 0) continue;
      const double f =
          fa_[axis][static_cast<size_t>(i)] * c[static_cast<size_t>(i)] -
          fb_[axis][static_cast<size_t>(i)] * c[static_cast<size_t>(j)];
      y[static_cast<size_t>(i)] += f;
      y[static_cast<size_t>(j)] -= f;
    }
  }
  return y;
}

IterStats TransportOperator::solve(const Vec& c_old, Vec& c_new, double tol, int max_iter,
                                   double negative_guard, const Vec* extra_rhs,
                                   bool raw_negative) const {
  const Vec b = rhs(c_old, extra_rhs);
  const Vec& d = diag_;
  const std::vector<std::uint8_t>& act = mask_;
  auto apply_op = [this](const Vec& x, Vec& y) { this->apply(x, y); };
  auto precond = [&d, &act](const Vec& r, Vec& z) {
    if (z.size() != r.size()) z.assign(r.size(), 0.0);
    for (size_t i = 0; i < r.size(); ++i)
      z[i] = (act[i] && d[i] > 0.0) ? r[i] / d[i] : 0.0;
  };
  // Delta form: solve A delta = b - A c_old. The tolerance then tracks the
  // step increment, which stays meaningful for the large pseudo-time steps
  // of the steady solver where (p V / dt) c itself becomes tiny.
  Vec bdelta(b.size(), 0.0);
  apply(c_old, bdelta);
  double state_scale = 0.0;
  for (size_t i = 0; i < b.size(); ++i) {
    bdelta[i] = b[i] - bdelta[i];
    if (mask_[i]) state_scale += pv_dt_ * c_old[i] * pv_dt_ * c_old[i];
  }
  state_scale = std::sqrt(state_scale);
  const double bnorm = norm2(bdelta);
  const double scale = std::max(bnorm, state_scale);
  const double eff_tol = (bnorm > 0.0 && scale > 0.0) ? tol * scale / bnorm : tol;
  Vec delta(b.size(), 0.0);
  IterStats st = bicgstab_solve(apply_op, precond, bdelta, delta, eff_tol, max_iter);
  if (!st.converged)
    throw SolverError("transport solve: BiCGStab did not converge (residual = " +
                      std::to_string(st.residual) + ")");
  c_new = c_old;
  for (size_t i = 0; i < c_new.size(); ++i)
    if (mask_[i]) c_new[i] += delta[i];
  if (raw_negative) {
    for (size_t i = 0; i < c_new.size(); ++i)
      if (!mask_[i]) c_new[i] = 0.0;
    return st;
  }
  double cmax = 0.0;
  for (size_t i = 0; i < c_new.size(); ++i)
    if (mask_[i]) cmax = std::max(cmax, std::abs(c_new[i]));
  const double guard = negative_guard * std::max(cmax, 1.0);
  for (size_t i = 0; i < c_new.size(); ++i) {
    if (!mask_[i]) {
      c_new[i] = 0.0;
      continue;
    }
    if (c_new[i] < 0.0) {
      if (c_new[i] < -guard)
        throw SolverError("transport solve: negative concentration at cell " +
                          std::to_string(i) + " (" + std::to_string(c_new[i]) + ")");
      c_new[i] = 0.0;
    }
  }
  return st;
}

} // namespace pnph
