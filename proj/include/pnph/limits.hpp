#ifndef PNPH_LIMITS_HPP
#define PNPH_LIMITS_HPP

#include <vector>

#include "pnph/macro.hpp"

namespace pnph {

/// Electroneutral bulk state of the thin-double-layer limit: the charge is
/// slaved to the surface charge, rho = -rho_s / p.
struct ThinDlState {
  Vec c, phi, rho;
  double time = 0.0;
};

/// Leading-order bulk approximation for thin double layers: each step solves
/// the conductivity-weighted Laplace problem div(c D grad phi) = 0, then
/// advances the salt p dc/dt = div(D grad c) - div((rho_s/p) D grad phi).
/// Salt depletion (c <= 0) aborts with RegimeError; this is the breakdown of
/// the weakly charged ("bad membrane") regime.
std::vector<ThinDlState> thin_dl_solve(const StructuredGrid& grid, const Vec& c0,
                                       const EffectiveTensors& t, const BoundarySpec& bc,
                                       double dt, int steps,
                                       const Vec* rho_s_field = nullptr,
                                       const StepOptions& opts = {});

/// Membrane limit of thick double layers: the macroscopic PNP operator with
/// eps_hat replaced by eps_bar^2 D_hat and M_hat = D_hat (insulating matrix),
/// in macroscopic variables.
MacroState membrane_step(const MacroState& state, const EffectiveTensors& t,
                         double eps_bar, const BoundarySpec& bc, double dt,
                         const StepOptions& opts = {});

/// Thin-film limit: the potential decouples and solves div(D grad phi) = 0.
/// Requires a Dirichlet face; all-Neumann data is rejected as non-unique.
Vec thin_film_potential(const StructuredGrid& grid, const EffectiveTensors& t,
                        const BoundarySpec& bc, const StepOptions& opts = {});

struct AmbipolarCoefficients {
  double D_bar = 0.0;
  double z_bar = 0.0;
  // retained inputs
  double z_plus = 1.0, z_minus = 1.0;
  double D_plus = 1.0, D_minus = 1.0;
  double M_plus = 1.0, M_minus = 1.0;
  double kT = 1.0;
};

/// D_bar = (z+ M+ D- + z- M- D+) / (z+ M+ + z- M-),
/// z_bar = 2 z+ z- M+ M- kT / (z+ D- M+ + z- D+ M-).
AmbipolarCoefficients ambipolar_coefficients(double z_plus, double z_minus, double D_plus,
                                             double D_minus, double M_plus, double M_minus,
                                             double kT);

/// One conservative implicit step of the ambipolar salt equation
///   p dc/dt = D_bar div(D grad c) - (z_bar/e) div(rho_s D grad phi)
///             - (D+ z_bar/(kT e z+ M+)) div(D grad rho_s)
/// assembled with the porosity-normalized tensor D/p, so for straight-channel
/// tensors the update does not depend on p at all.
Vec ambipolar_step(const StructuredGrid& grid, const Vec& c,
                   const AmbipolarCoefficients& coeffs, const EffectiveTensors& t,
                   const Vec& rho_s, const Vec& phi_tilde, double dt, double e = 1.0,
                   const BoundarySpec& bc = BoundarySpec::no_flux(),
                   const StepOptions& opts = {});

/// Ambipolar salt variable of the quasi-neutral convention:
/// c = (z+ C+ + z- C-) + rho_s/(p e).
double ambipolar_salt(double C_plus, double C_minus, double z_plus, double z_minus,
                      double rho_s, double e, double p);

/// Residual of the quasi-neutrality convention p e (z+ C+ - z- C-) + rho_s.
double quasi_neutrality_residual(double C_plus, double C_minus, double z_plus,
                                 double z_minus, double rho_s, double e, double p);

} // namespace pnph

#endif
