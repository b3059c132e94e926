#include "pnph/conductivity.hpp"

#include <cmath>
#include <string>

#include "pnph/correctors.hpp"
#include "pnph/errors.hpp"
#include "pnph/fvpoisson.hpp"

namespace pnph {

EigenResult first_dirichlet_eigenvalue(const ReferenceCell& cell, double tol) {
  if (tol <= 0.0) throw ConfigError("eigenvalue tolerance must be positive");
  const StructuredGrid& g = cell.grid();
  const index_t n = g.cell_count();
  std::vector<std::uint8_t> active(static_cast<size_t>(n), 0);
  for (index_t i = 0; i < n; ++i)
    if (cell.pore(i)) active[static_cast<size_t>(i)] = 1;

  std::array<std::array<OuterFace, 2>, 3> outer{};  // periodic continuation
  FvPoisson op(g, Vec(static_cast<size_t>(n), 1.0), std::move(active), {1.0, 1.0, 1.0},
               outer, /*interface_dirichlet=*/true);
  if (op.has_floating_component())
    throw SolverError("eigenvalue solve: pore phase has a component without "
                      "interface contact");

  const double vol = g.cell_volume();
  auto normalize = [&](Vec& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i)
      if (op.is_active(static_cast<index_t>(i))) s += v[i] * v[i] * vol;
    s = std::sqrt(s);
    if (s == 0.0) throw SolverError("eigenvalue solve: degenerate iterate");
    for (double& x : v) x /= s;
    return s;
  };

  Vec v(static_cast<size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i)
    if (op.is_active(i)) v[static_cast<size_t>(i)] = 1.0;
  normalize(v);

  // Inverse power iteration with shift 0 on the generalized problem
  // A u = theta * vol * u (the FV operator integrates over cells).
  const int cap = corrector_iteration_cap(g) * 4;
  double theta = 0.0;
  double residual = 1.0;
  int iters = 0;
  Vec w(static_cast<size_t>(n), 0.0), av;
  for (int it = 0; it < 400; ++it) {
    Vec rhs(static_cast<size_t>(n), 0.0);
    for (size_t i = 0; i < rhs.size(); ++i)
      if (op.is_active(static_cast<index_t>(i))) rhs[i] = vol * v[i];
    op.solve(rhs, w, std::min(1e-12, tol * 1e-3), cap);
    // Rayleigh quotient through the solve: A w = vol v  =>  theta = (w,v)/(w,w).
    double wv = 0.0, ww = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      if (!op.is_active(static_cast<index_t>(i))) continue;
      wv += w[i] * v[i] * vol;
      ww += w[i] * w[i] * vol;
    }
    const double theta_new = wv / ww;
    normalize(w);
    v = w;
    ++iters;
    op.apply(v, av);
    double rnorm = 0.0;
    for (size_t i = 0; i < av.size(); ++i) {
      if (!op.is_active(static_cast<index_t>(i))) continue;
      const double r = av[i] - theta_new * vol * v[i];
      rnorm += r * r / vol;  // back to L2 density scale
    }
    rnorm = std::sqrt(rnorm);
    residual = rnorm / theta_new;
    const bool settled = std::abs(theta_new - theta) <= tol * std::abs(theta_new);
    theta = theta_new;
    if (settled && residual <= tol) break;
  }
  if (!(residual <= tol))
    throw SolverError("eigenvalue solve: inverse iteration did not converge "
                      "(relative residual = " + std::to_string(residual) + ")");

  // Sign fix: the ground state does not change sign.
  double mean = 0.0;
  for (size_t i = 0; i < v.size(); ++i)
    if (op.is_active(static_cast<index_t>(i))) mean += v[i];
  if (mean < 0.0)
    for (double& x : v) x = -x;

  EigenResult res;
  res.theta_1 = theta;
  res.u_1 = std::move(v);
  res.residual = residual;
  res.iterations = iters;
  return res;
}

double cheeger_rectangle(double L1, double L2) {
  if (L1 <= 0.0 || L2 <= 0.0) throw ConfigError("cheeger_rectangle: sides must be positive");
  const double pi = 3.14159265358979323846;
  const double denom = L1 + L2 - std::sqrt((L1 - L2) * (L1 - L2) + pi * L1 * L2);
  return (4.0 - pi) / denom;
}

double cheeger_lower_bound(double h) {
  if (h <= 0.0) throw ConfigError("cheeger_lower_bound: h must be positive");
  return 0.25 * h * h;
}

double conductivity_estimate(double p, double epsilon, double s, double theta_1, double c) {
  if (p <= 0.0) throw ConfigError("conductivity_estimate: p must be positive");
  if (s == 0.0) throw ConfigError("conductivity_estimate: s must be nonzero");
  if (epsilon < 0.0) throw ConfigError("conductivity_estimate: epsilon must be nonnegative");
  if (theta_1 <= 0.0) throw ConfigError("conductivity_estimate: theta_1 must be positive");
  if (c < 0.0) throw ConfigError("conductivity_estimate: c must be nonnegative");
  return p * (epsilon * epsilon * theta_1 / (s * s) + c);
}

OptimizeResult optimize_rectangle(double L2_fixed, double L1_lo, double L1_hi,
                                  const ConductivityObjective& obj, int grid_points) {
  if (L2_fixed <= 0.0) throw ConfigError("optimize_rectangle: L2 must be positive");
  if (L1_lo <= 0.0 || L1_hi < L1_lo) throw ConfigError("optimize_rectangle: bad L1 range");
  OptimizeResult r;
  // h(L1, L2) is strictly decreasing in L1, so minimizing the channel height
  // maximizes the Cheeger bound and with it the conductivity estimate.
  r.L1_star = L1_lo;
  r.cheeger_h = cheeger_rectangle(r.L1_star, L2_fixed);
  r.theta_lower_bound = cheeger_lower_bound(r.cheeger_h);
  r.sigma_star = conductivity_estimate(obj.p, obj.epsilon, obj.s, r.theta_lower_bound, obj.c);
  if (grid_points > 1) {
    const double pi = 3.14159265358979323846;
    double best_sigma = -1.0, best_L1 = L1_lo;
    for (int i = 0; i < grid_points; ++i) {
      const double L1 = L1_lo + (L1_hi - L1_lo) * i / (grid_points - 1);
      const double theta = pi * pi * (1.0 / (L1 * L1) + 1.0 / (L2_fixed * L2_fixed));
      const double sigma = conductivity_estimate(obj.p, obj.epsilon, obj.s, theta, obj.c);
      if (sigma > best_sigma) {
        best_sigma = sigma;
        best_L1 = L1;
      }
    }
    r.L1_star_grid = best_L1;
    r.sigma_star_grid = best_sigma;
  }
  return r;
}

} // namespace pnph
