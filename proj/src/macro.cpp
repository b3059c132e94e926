#include "pnph/macro.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "pnph/errors.hpp"
#include "pnph/fvpoisson.hpp"
#include "pnph/transport.hpp"

namespace pnph {

ScaleSet rescale_macro(const ScaleSet& s, double r) {
  if (r <= 0.0 || r > 1.0) throw ConfigError("rescale_macro: r must be in (0, 1]");
  ScaleSet out = s;
  out.r = r;
  out.L = s.ell / r;
  out.eps_bar = r * s.epsilon;
  out.t_D = s.ell * s.ell / s.diffusivity;
  return out;
}

std::array<double, 3> diagonal_entries(const Mat& m, const char* what) {
  std::array<double, 3> d{0.0, 0.0, 0.0};
  double scale = m.max_abs();
  for (int i = 0; i < m.rows; ++i) {
    d[static_cast<size_t>(i)] = m(i, i);
    for (int j = 0; j < m.cols; ++j)
      if (i != j && std::abs(m(i, j)) > 1e-8 * std::max(scale, 1.0))
        throw ConfigError(std::string(what) +
                          ": the face scheme needs a diagonal tensor");
  }
  return d;
}

double species_total(const StructuredGrid& g, const Vec& c) {
  double s = 0.0;
  for (double v : c) s += v;
  return s * g.cell_volume();
}

namespace {

std::array<std::array<OuterFace, 2>, 3> poisson_faces(const BoundarySpec& bc,
                                                      const StructuredGrid& g) {
  std::array<std::array<OuterFace, 2>, 3> outer{};
  for (int a = 0; a < g.dim; ++a) {
    for (int s = 0; s < 2; ++s) {
      const FaceCondition& fc = bc.face[a][static_cast<size_t>(s)];
      OuterFace& of = outer[a][static_cast<size_t>(s)];
      switch (fc.type) {
        case FaceConditionType::Dirichlet:
        case FaceConditionType::Grounded:
          of.kind = OuterFace::Dirichlet;
          of.value = fc.phi;
          break;
        case FaceConditionType::NoFlux:
        case FaceConditionType::AppliedCurrent:
          of.kind = OuterFace::NeumannFlux;
          of.value = 0.0;
          break;
      }
    }
  }
  // Unused trailing axes must not stay periodic (the kernel would couple them).
  for (int a = g.dim; a < 3; ++a)
    for (int s = 0; s < 2; ++s) outer[a][static_cast<size_t>(s)].kind = OuterFace::NeumannFlux;
  return outer;
}

/// -div(eps_hat grad phi) = p (c+ - c-) + rho_s
IterStats solve_macro_poisson(const StructuredGrid& g, const EffectiveTensors& t,
                              const BoundarySpec& bc, const Vec& c_plus,
                              const Vec& c_minus, Vec& phi, const StepOptions& opts) {
  const std::array<double, 3> eps = diagonal_entries(t.eps_hat, "poisson");
  FvPoisson op(g, Vec(static_cast<size_t>(g.cell_count()), 1.0), {}, eps,
               poisson_faces(bc, g));
  const double vol = g.cell_volume();
  Vec rhs(static_cast<size_t>(g.cell_count()), 0.0);
  for (size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = (t.p * (c_plus[i] - c_minus[i]) + t.rho_s) * vol;
  return op.solve(rhs, phi, opts.linear_tol, opts.max_linear_iter, opts.poisson_compat_tol);
}

/// Gummel-map potential update: Newton on the nonlinear Poisson equation with
/// the ion densities responding as c+- exp(-+(phi - phi_ref)) at frozen
/// electrochemical potentials. The exponential response removes the stiff
/// charge overshoot of a plain linear Poisson solve.
void solve_gummel_poisson(const StructuredGrid& g, const EffectiveTensors& t,
                          const BoundarySpec& bc, const Vec& c_plus, const Vec& c_minus,
                          const Vec& phi_ref, Vec& phi, const StepOptions& opts) {
  const std::array<double, 3> eps = diagonal_entries(t.eps_hat, "poisson");
  const double vol = g.cell_volume();
  const size_t n = static_cast<size_t>(g.cell_count());
  phi = phi_ref;
  auto clamp_exp = [](double x) { return std::exp(std::min(40.0, std::max(-40.0, x))); };
  for (int newton = 0; newton < 60; ++newton) {
    Vec jac(n, 0.0), resid(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      const double d = phi[i] - phi_ref[i];
      const double cp = c_plus[i] * clamp_exp(-d);
      const double cm = c_minus[i] * clamp_exp(+d);
      resid[i] = (t.p * (cp - cm) + t.rho_s) * vol;
      jac[i] = t.p * (cp + cm) * vol;
    }
    FvPoisson op(g, Vec(n, 1.0), {}, eps, poisson_faces(bc, g), false, jac);
    // Newton step: solve for phi_next with the linearized charge.
    Vec rhs(n, 0.0);
    for (size_t i = 0; i < n; ++i) rhs[i] = resid[i] + jac[i] * phi[i];
    Vec phi_next = phi;
    op.solve(rhs, phi_next, opts.linear_tol, opts.max_linear_iter,
             opts.poisson_compat_tol);
    double change = 0.0;
    for (size_t i = 0; i < n; ++i) change = std::max(change, std::abs(phi_next[i] - phi[i]));
    phi = phi_next;
    if (change < 1e-12) break;
  }
}

} // namespace

MacroState step_macro_pnp(const MacroState& state, const EffectiveTensors& t,
                          const BoundarySpec& bc, double dt, const StepOptions& opts,
                          StepStats* stats) {
  const StructuredGrid& g = state.grid;
  MacroState out = state;
  IterStats pst = solve_macro_poisson(g, t, bc, state.c_plus, state.c_minus, out.phi, opts);

  const std::array<double, 3> D = diagonal_entries(t.D_hat, "diffusion");
  const std::array<double, 3> M = diagonal_entries(t.M_hat, "mobility");
  TransportOperator plus_op(g, {}, out.phi, +1.0, D, M, t.p, dt, bc);
  TransportOperator minus_op(g, {}, out.phi, -1.0, D, M, t.p, dt, bc);
  IterStats sp = plus_op.solve(state.c_plus, out.c_plus, opts.linear_tol,
                               opts.max_linear_iter, opts.negative_guard);
  IterStats sm = minus_op.solve(state.c_minus, out.c_minus, opts.linear_tol,
                                opts.max_linear_iter, opts.negative_guard);
  out.time = state.time + dt;
  if (stats) {
    stats->poisson_iterations = pst.iterations;
    stats->poisson_residual = pst.residual;
    stats->transport_iterations = sp.iterations + sm.iterations;
    stats->transport_residual = std::max(sp.residual, sm.residual);
  }
  return out;
}

SaltChargeState to_salt_charge(const MacroState& s) {
  SaltChargeState out;
  out.grid = s.grid;
  out.time = s.time;
  out.phi = s.phi;
  const size_t n = s.c_plus.size();
  out.c.resize(n);
  out.rho.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.c[i] = 0.5 * (s.c_plus[i] + s.c_minus[i]);
    out.rho[i] = 0.5 * (s.c_plus[i] - s.c_minus[i]);
  }
  return out;
}

MacroState from_salt_charge(const SaltChargeState& s) {
  MacroState out;
  out.grid = s.grid;
  out.time = s.time;
  out.phi = s.phi;
  const size_t n = s.c.size();
  out.c_plus.resize(n);
  out.c_minus.resize(n);
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(s.rho[i]) > s.c[i] * (1.0 + 1e-12) + 1e-300)
      throw ConfigError("from_salt_charge: |rho| > c implies a negative concentration "
                        "at cell " + std::to_string(i));
    out.c_plus[i] = s.c[i] + s.rho[i];
    out.c_minus[i] = s.c[i] - s.rho[i];
  }
  return out;
}

MacroState step_salt_charge(const MacroState& state, const EffectiveTensors& t,
                            const BoundarySpec& bc, double dt, const StepOptions& opts,
                            StepStats* stats) {
  const StructuredGrid& g = state.grid;
  const index_t n = g.cell_count();
  MacroState scratch = state;
  IterStats pst =
      solve_macro_poisson(g, t, bc, state.c_plus, state.c_minus, scratch.phi, opts);

  const std::array<double, 3> D = diagonal_entries(t.D_hat, "diffusion");
  const std::array<double, 3> M = diagonal_entries(t.M_hat, "mobility");
  const TransportOperator plus_op(g, {}, scratch.phi, +1.0, D, M, t.p, dt, bc);
  const TransportOperator minus_op(g, {}, scratch.phi, -1.0, D, M, t.p, dt, bc);

  // Coupled block system in (c, rho): the salt and charge fluxes are the
  // half-sum and half-difference of the species fluxes, which are linear in
  // (c, rho) through c+- = c +- rho.
  const SaltChargeState sc = to_salt_charge(state);
  const size_t N = static_cast<size_t>(n);
  Vec x(2 * N, 0.0), b(2 * N, 0.0);
  for (size_t i = 0; i < N; ++i) {
    x[i] = sc.c[i];
    x[N + i] = sc.rho[i];
    b[i] = plus_op.pv_dt() * sc.c[i] +
           0.5 * (plus_op.rhs_bc_[i] + minus_op.rhs_bc_[i]);
    b[N + i] = plus_op.pv_dt() * sc.rho[i] +
               0.5 * (plus_op.rhs_bc_[i] - minus_op.rhs_bc_[i]);
  }

  auto apply_block = [&](const Vec& v, Vec& y) {
    y.assign(2 * N, 0.0);
    for (size_t i = 0; i < N; ++i) {
      const double cp = v[i] + v[N + i];
      const double cm = v[i] - v[N + i];
      const double fp = plus_op.diag_bc_[i] * cp;
      const double fm = minus_op.diag_bc_[i] * cm;
      y[i] = plus_op.pv_dt() * v[i] + 0.5 * (fp + fm);
      y[N + i] = plus_op.pv_dt() * v[N + i] + 0.5 * (fp - fm);
    }
    for (int axis = 0; axis < g.dim; ++axis) {
      for (index_t ii = 0; ii < n; ++ii) {
        const size_t i = static_cast<size_t>(ii);
        const index_t jj = plus_op.nbp_[axis][i];
        if (jj < 0) continue;
        const size_t j = static_cast<size_t>(jj);
        const double cp_i = v[i] + v[N + i], cp_j = v[j] + v[N + j];
        const double cm_i = v[i] - v[N + i], cm_j = v[j] - v[N + j];
        const double Fp = plus_op.fa_[axis][i] * cp_i - plus_op.fb_[axis][i] * cp_j;
        const double Fm = minus_op.fa_[axis][i] * cm_i - minus_op.fb_[axis][i] * cm_j;
        const double Fc = 0.5 * (Fp + Fm);
        const double Fr = 0.5 * (Fp - Fm);
        y[i] += Fc;
        y[j] -= Fc;
        y[N + i] += Fr;
        y[N + j] -= Fr;
      }
    }
  };
  Vec diag(2 * N, 1.0);
  for (size_t i = 0; i < N; ++i) {
    const double d = plus_op.pv_dt() + 0.5 * (plus_op.diag_[i] - plus_op.pv_dt() +
                                              minus_op.diag_[i] - minus_op.pv_dt());
    diag[i] = d;
    diag[N + i] = d;
  }
  auto precond = [&diag](const Vec& r, Vec& z) {
    if (z.size() != r.size()) z.assign(r.size(), 0.0);
    for (size_t i = 0; i < r.size(); ++i) z[i] = r[i] / diag[i];
  };
  IterStats st = bicgstab_solve(apply_block, precond, b, x, opts.linear_tol,
                                opts.max_linear_iter);
  if (!st.converged)
    throw SolverError("salt/charge step: BiCGStab did not converge (residual = " +
                      std::to_string(st.residual) + ")");

  SaltChargeState out;
  out.grid = g;
  out.time = state.time + dt;
  out.phi = scratch.phi;
  out.c.assign(N, 0.0);
  out.rho.assign(N, 0.0);
  for (size_t i = 0; i < N; ++i) {
    out.c[i] = x[i];
    out.rho[i] = x[N + i];
  }
  MacroState result = from_salt_charge(out);
  if (stats) {
    stats->poisson_iterations = pst.iterations;
    stats->poisson_residual = pst.residual;
    stats->transport_iterations = st.iterations;
    stats->transport_residual = st.residual;
  }
  return result;
}

MacroResiduals macro_residuals(const MacroState& state, const EffectiveTensors& t,
                               const BoundarySpec& bc) {
  const StructuredGrid& g = state.grid;
  const double vol = g.cell_volume();
  MacroResiduals r;

  const std::array<double, 3> eps = diagonal_entries(t.eps_hat, "poisson");
  FvPoisson op(g, Vec(static_cast<size_t>(g.cell_count()), 1.0), {}, eps,
               poisson_faces(bc, g));
  Vec aphi;
  op.apply(state.phi, aphi);
  for (size_t i = 0; i < aphi.size(); ++i) {
    const double rhs =
        (t.p * (state.c_plus[i] - state.c_minus[i]) + t.rho_s) * vol +
        op.boundary_rhs()[i];
    r.poisson = std::max(r.poisson, std::abs(aphi[i] - rhs) / vol);
  }

  const std::array<double, 3> D = diagonal_entries(t.D_hat, "diffusion");
  const std::array<double, 3> M = diagonal_entries(t.M_hat, "mobility");
  const TransportOperator plus_op(g, {}, state.phi, +1.0, D, M, t.p, 1.0, bc);
  const TransportOperator minus_op(g, {}, state.phi, -1.0, D, M, t.p, 1.0, bc);
  const Vec dp = plus_op.flux_divergence(state.c_plus);
  const Vec dm = minus_op.flux_divergence(state.c_minus);
  for (size_t i = 0; i < dp.size(); ++i) {
    r.c_plus = std::max(r.c_plus, std::abs(dp[i]) / vol);
    r.c_minus = std::max(r.c_minus, std::abs(dm[i]) / vol);
  }
  return r;
}

MacroState steady_state(const MacroState& state, const EffectiveTensors& t,
                        const BoundarySpec& bc, double tol, const SteadyOptions& opts) {
  if (tol <= 0.0) throw ConfigError("steady_state: tol must be positive");
  MacroState cur = state;
  const StructuredGrid& g = state.grid;
  const std::array<double, 3> D = diagonal_entries(t.D_hat, "diffusion");
  const std::array<double, 3> M = diagonal_entries(t.M_hat, "mobility");

  // Switched evolution relaxation: grow the pseudo-step while the residual
  // shrinks, back off when a step overshoots (the lagged-potential coupling
  // is only conditionally stable far from equilibrium).
  double dt = opts.pseudo_dt0;
  const double dt_min = 1e-9;
  double res_prev = macro_residuals(cur, t, bc).max();
  if (res_prev <= tol) return cur;
  std::vector<double> history{res_prev};
  int backoffs = 0;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    MacroState trial = cur;
    if (!opts.frozen_phi) {
      Vec phi_new = trial.phi;
      solve_gummel_poisson(g, t, bc, trial.c_plus, trial.c_minus, cur.phi, phi_new,
                           opts.step);
      for (size_t i = 0; i < trial.phi.size(); ++i)
        trial.phi[i] += opts.damping * (phi_new[i] - trial.phi[i]);
    }
    bool step_ok = true;
    try {
      TransportOperator plus_op(g, {}, trial.phi, +1.0, D, M, t.p, dt, bc);
      TransportOperator minus_op(g, {}, trial.phi, -1.0, D, M, t.p, dt, bc);
      Vec cp = trial.c_plus, cm = trial.c_minus;
      plus_op.solve(trial.c_plus, cp, opts.step.linear_tol, opts.step.max_linear_iter,
                    opts.step.negative_guard);
      minus_op.solve(trial.c_minus, cm, opts.step.linear_tol, opts.step.max_linear_iter,
                     opts.step.negative_guard);
      trial.c_plus = cp;
      trial.c_minus = cm;
    } catch (const SolverError&) {
      step_ok = false;
    }
    double rmax = res_prev;
    if (step_ok) {
      MacroResiduals res = macro_residuals(trial, t, bc);
      rmax = std::max(res.c_plus, res.c_minus);
      if (!opts.frozen_phi) rmax = std::max(rmax, res.poisson);
    }
    if (!step_ok || (rmax > 2.0 * res_prev && dt > dt_min)) {
      dt = std::max(dt * 0.25, dt_min);
      if (++backoffs > 120)
        throw SolverError("steady_state: pseudo-step control failed to stabilize");
      continue;  // retry from the unmodified state
    }
    cur = trial;
    res_prev = std::min(res_prev, rmax);
    history.push_back(rmax);
    if (rmax <= tol) return cur;
    dt = std::min(dt * opts.pseudo_dt_growth, opts.pseudo_dt_max);
    const size_t k = history.size();
    if (k > 30 && history[k - 1] > 0.999 * history[k - 31]) {
      std::string hist;
      char buf[32];
      for (size_t i = (k > 8 ? k - 8 : 0); i < k; ++i) {
        std::snprintf(buf, sizeof(buf), "%.3e", history[i]);
        hist += (hist.empty() ? "" : ", ") + std::string(buf);
      }
      throw SolverError("steady_state: stagnation, residual history [" + hist + "]");
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", history.back());
  throw SolverError("steady_state: no convergence within max_outer iterations "
                    "(residual = " + std::string(buf) + ")");
}

} // namespace pnph
