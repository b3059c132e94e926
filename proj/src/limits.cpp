#include "pnph/limits.hpp"

#include <cmath>
#include <string>

#include "pnph/errors.hpp"
#include "pnph/fvpoisson.hpp"
#include "pnph/transport.hpp"

namespace pnph {

namespace {

std::array<std::array<OuterFace, 2>, 3> potential_faces(const BoundarySpec& bc,
                                                        const StructuredGrid& g,
                                                        bool current_as_flux) {
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
        case FaceConditionType::AppliedCurrent:
          of.kind = OuterFace::NeumannFlux;
          of.value = current_as_flux ? fc.current : 0.0;
          break;
        case FaceConditionType::NoFlux:
          of.kind = OuterFace::NeumannFlux;
          of.value = 0.0;
          break;
      }
    }
  }
  for (int a = g.dim; a < 3; ++a)
    for (int s = 0; s < 2; ++s) outer[a][static_cast<size_t>(s)].kind = OuterFace::NeumannFlux;
  return outer;
}

/// Conservative divergence of the known drift field (rho_s/p) D grad(phi),
/// with one-sided closures at Dirichlet potential faces.
Vec drift_divergence(const StructuredGrid& g, const std::array<double, 3>& D,
                     const Vec& rho_over_p, const Vec& phi, const BoundarySpec& bc) {
  const index_t n = g.cell_count();
  Vec div(static_cast<size_t>(n), 0.0);
  for (int axis = 0; axis < g.dim; ++axis) {
    if (D[axis] <= 1e-14) continue;
    const double A = g.face_area(axis);
    const double h = g.spacing(axis);
    for (index_t i = 0; i < n; ++i) {
      if (!g.on_boundary(i, axis, +1)) {
        const index_t j = g.periodic_neighbor(i, axis, +1);
        const double w = 0.5 * (rho_over_p[static_cast<size_t>(i)] +
                                rho_over_p[static_cast<size_t>(j)]);
        const double q = w * D[axis] *
                         (phi[static_cast<size_t>(j)] - phi[static_cast<size_t>(i)]) * A / h;
        div[static_cast<size_t>(i)] += q;
        div[static_cast<size_t>(j)] -= q;
      }
      for (int side : {0, 1}) {
        if (!g.on_boundary(i, axis, side == 0 ? -1 : +1)) continue;
        const FaceCondition& fc = bc.face[axis][static_cast<size_t>(side)];
        if (fc.type == FaceConditionType::Dirichlet ||
            fc.type == FaceConditionType::Grounded) {
          const double q = rho_over_p[static_cast<size_t>(i)] * D[axis] *
                           (fc.phi - phi[static_cast<size_t>(i)]) * A / (0.5 * h);
          div[static_cast<size_t>(i)] += q;
        }
        // Blocking faces carry no salt flux, drift included.
      }
    }
  }
  return div;
}

} // namespace

std::vector<ThinDlState> thin_dl_solve(const StructuredGrid& grid, const Vec& c0,
                                       const EffectiveTensors& t, const BoundarySpec& bc,
                                       double dt, int steps, const Vec* rho_s_field,
                                       const StepOptions& opts) {
  const index_t n = grid.cell_count();
  if (static_cast<index_t>(c0.size()) != n) throw ConfigError("thin_dl_solve: c0 size mismatch");
  for (double v : c0)
    if (v <= 0.0) throw RegimeError("thin_dl_solve: initial salt must be positive");
  const std::array<double, 3> D = diagonal_entries(t.D_hat, "thin_dl diffusion");

  Vec rho_s(static_cast<size_t>(n), t.rho_s);
  if (rho_s_field) {
    if (rho_s_field->size() != static_cast<size_t>(n))
      throw ConfigError("thin_dl_solve: rho_s field size mismatch");
    rho_s = *rho_s_field;
  }
  Vec rho_over_p(static_cast<size_t>(n));
  Vec rho(static_cast<size_t>(n));
  for (size_t i = 0; i < rho_s.size(); ++i) {
    rho_over_p[i] = rho_s[i] / t.p;
    rho[i] = -rho_s[i] / t.p;  // quasi-electroneutrality of the composite
  }

  std::vector<ThinDlState> traj;
  Vec c = c0;
  Vec phi(static_cast<size_t>(n), 0.0);
  const auto outer = potential_faces(bc, grid, /*current_as_flux=*/true);
  // Dirichlet faces are electrolyte reservoirs; the bulk salt value on the
  // medium side is the Donnan-equilibrated one, with the local charge slaved
  // to the surface charge.
  BoundarySpec salt_bc = bc;
  for (int a = 0; a < grid.dim; ++a)
    for (int s = 0; s < 2; ++s) {
      FaceCondition& fc = salt_bc.face[a][static_cast<size_t>(s)];
      if (fc.type == FaceConditionType::Dirichlet) {
        const double q = t.rho_s / (2.0 * t.p);
        const double salt = std::sqrt(fc.c_plus * fc.c_minus + q * q);
        fc.c_plus = fc.c_minus = salt;
      }
    }

  for (int k = 0; k <= steps; ++k) {
    // Charge conservation of the quasi-neutral bulk: div(c D grad phi) = 0.
    FvPoisson pot(grid, c, {}, D, outer);
    Vec zero(static_cast<size_t>(n), 0.0);
    pot.solve(zero, phi, opts.linear_tol, opts.max_linear_iter, opts.poisson_compat_tol);
    ThinDlState snap;
    snap.c = c;
    snap.phi = phi;
    snap.rho = rho;
    snap.time = k * dt;
    traj.push_back(snap);
    if (k == steps) break;

    const Vec drift = drift_divergence(grid, D, rho_over_p, phi, bc);
    Vec extra(static_cast<size_t>(n));
    for (size_t i = 0; i < extra.size(); ++i) extra[i] = -drift[i];
    TransportOperator diff(grid, {}, phi, 0.0, D, {0.0, 0.0, 0.0}, t.p, dt, salt_bc);
    Vec c_new = c;
    diff.solve(c, c_new, opts.linear_tol, opts.max_linear_iter, opts.negative_guard,
               &extra, /*raw_negative=*/true);
    for (size_t i = 0; i < c_new.size(); ++i)
      if (c_new[i] <= 0.0)
        throw RegimeError("thin_dl_solve: salt depleted at cell " + std::to_string(i) +
                          " (bad-membrane regime boundary)");
    c = c_new;
  }
  return traj;
}

MacroState membrane_step(const MacroState& state, const EffectiveTensors& t,
                         double eps_bar, const BoundarySpec& bc, double dt,
                         const StepOptions& opts) {
  if (t.alpha != 0.0)
    throw ConfigError("membrane_step: the membrane limit assumes an insulating matrix");
  EffectiveTensors tt = t;
  tt.M_hat = t.D_hat;
  tt.eps_hat = (eps_bar * eps_bar) * t.D_hat;
  tt.epsilon = eps_bar;
  return step_macro_pnp(state, tt, bc, dt, opts);
}

Vec thin_film_potential(const StructuredGrid& grid, const EffectiveTensors& t,
                        const BoundarySpec& bc, const StepOptions& opts) {
  const std::array<double, 3> D = diagonal_entries(t.D_hat, "thin_film");
  bool any_dirichlet = false;
  for (int a = 0; a < grid.dim; ++a)
    for (int s = 0; s < 2; ++s) {
      const auto type = bc.face[a][static_cast<size_t>(s)].type;
      if (type == FaceConditionType::Dirichlet || type == FaceConditionType::Grounded)
        any_dirichlet = true;
    }
  if (!any_dirichlet)
    throw ConfigError("thin_film_potential: all-Neumann data is non-unique; "
                      "a Dirichlet face is required");
  FvPoisson pot(grid, Vec(static_cast<size_t>(grid.cell_count()), 1.0), {}, D,
                potential_faces(bc, grid, /*current_as_flux=*/true));
  Vec phi(static_cast<size_t>(grid.cell_count()), 0.0);
  Vec zero(static_cast<size_t>(grid.cell_count()), 0.0);
  pot.solve(zero, phi, opts.linear_tol, opts.max_linear_iter, opts.poisson_compat_tol);
  return phi;
}

AmbipolarCoefficients ambipolar_coefficients(double z_plus, double z_minus, double D_plus,
                                             double D_minus, double M_plus, double M_minus,
                                             double kT) {
  if (z_plus <= 0.0 || z_minus <= 0.0 || D_plus <= 0.0 || D_minus <= 0.0 ||
      M_plus <= 0.0 || M_minus <= 0.0 || kT <= 0.0)
    throw ConfigError("ambipolar_coefficients: all physical inputs must be positive");
  const double denom_D = z_plus * M_plus + z_minus * M_minus;
  const double denom_z = z_plus * D_minus * M_plus + z_minus * D_plus * M_minus;
  if (denom_D == 0.0 || denom_z == 0.0)
    throw ConfigError("ambipolar_coefficients: zero denominator");
  AmbipolarCoefficients c;
  c.D_bar = (z_plus * M_plus * D_minus + z_minus * M_minus * D_plus) / denom_D;
  c.z_bar = 2.0 * z_plus * z_minus * M_plus * M_minus * kT / denom_z;
  c.z_plus = z_plus;
  c.z_minus = z_minus;
  c.D_plus = D_plus;
  c.D_minus = D_minus;
  c.M_plus = M_plus;
  c.M_minus = M_minus;
  c.kT = kT;
  return c;
}

Vec ambipolar_step(const StructuredGrid& grid, const Vec& c,
                   const AmbipolarCoefficients& coeffs, const EffectiveTensors& t,
                   const Vec& rho_s, const Vec& phi_tilde, double dt, double e,
                   const BoundarySpec& bc, const StepOptions& opts) {
  const index_t n = grid.cell_count();
  if (static_cast<index_t>(c.size()) != n || static_cast<index_t>(rho_s.size()) != n ||
      static_cast<index_t>(phi_tilde.size()) != n)
    throw ConfigError("ambipolar_step: field size mismatch");
  if (e == 0.0) throw ConfigError("ambipolar_step: e must be nonzero");

  // Porosity-normalized tensor: dividing the equation by the constant p makes
  // the straight-channel update independent of p (D_hat = p I on the open
  // axes gives exactly unit entries).
  const std::array<double, 3> D = diagonal_entries(t.D_hat, "ambipolar");
  std::array<double, 3> A{0.0, 0.0, 0.0};
  for (int a = 0; a < grid.dim; ++a) A[static_cast<size_t>(a)] = D[static_cast<size_t>(a)] / t.p;
  std::array<double, 3> Adiff = A;
  for (double& v : Adiff) v *= coeffs.D_bar;

  // Known-field source terms, conservative face form on the normalized tensor.
  const double k_phi = coeffs.z_bar / e;
  const double k_rho = coeffs.D_plus * coeffs.z_bar /
                       (coeffs.kT * e * coeffs.z_plus * coeffs.M_plus);
  Vec extra(static_cast<size_t>(n), 0.0);
  for (int axis = 0; axis < grid.dim; ++axis) {
    if (A[static_cast<size_t>(axis)] <= 1e-14) continue;
    const double fa = grid.face_area(axis);
    const double h = grid.spacing(axis);
    const double coef = A[static_cast<size_t>(axis)] * fa / h;
    for (index_t i = 0; i < n; ++i) {
      if (grid.on_boundary(i, axis, +1)) continue;  // blocking outer faces
      const index_t j = grid.periodic_neighbor(i, axis, +1);
      const size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
      const double rho_face = 0.5 * (rho_s[si] + rho_s[sj]);
      const double q_phi = k_phi * rho_face * coef * (phi_tilde[sj] - phi_tilde[si]);
      const double q_rho = k_rho * coef * (rho_s[sj] - rho_s[si]);
      // out-flux of the known drift fields through the +face; the equation
      // subtracts their divergence.
      const double q = q_phi + q_rho;
      extra[si] -= q;
      extra[sj] += q;
    }
  }

  Vec phi_zero(static_cast<size_t>(n), 0.0);
  TransportOperator diff(grid, {}, phi_zero, 0.0, Adiff, {0.0, 0.0, 0.0}, 1.0, dt, bc);
  Vec c_new = c;
  diff.solve(c, c_new, opts.linear_tol, opts.max_linear_iter, opts.negative_guard, &extra);
  return c_new;
}

double ambipolar_salt(double C_plus, double C_minus, double z_plus, double z_minus,
                      double rho_s, double e, double p) {
  if (p <= 0.0 || e == 0.0) throw ConfigError("ambipolar_salt: bad p or e");
  return z_plus * C_plus + z_minus * C_minus + rho_s / (p * e);
}

double quasi_neutrality_residual(double C_plus, double C_minus, double z_plus,
                                 double z_minus, double rho_s, double e, double p) {
  return p * e * (z_plus * C_plus - z_minus * C_minus) + rho_s;
}

} // namespace pnph
