#ifndef PNPH_MACRO_HPP
#define PNPH_MACRO_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "pnph/linalg.hpp"
#include "pnph/structured.hpp"
#include "pnph/tensors.hpp"

namespace pnph {

/// Macroscopic boundary conditions (artifact-defined; the upscaled equations
/// come without them). Grounded = blocking walls for the ions with the
/// potential pinned at `phi`.
enum class FaceConditionType { NoFlux, Dirichlet, AppliedCurrent, Grounded };

struct FaceCondition {
  FaceConditionType type = FaceConditionType::NoFlux;
  double c_plus = 1.0;
  double c_minus = 1.0;
  double phi = 0.0;
  double current = 0.0;  // outward charge-flux density for AppliedCurrent
};

struct BoundarySpec {
  std::array<std::array<FaceCondition, 2>, 3> face{};  // [axis][0=low, 1=high]

  static BoundarySpec uniform(const FaceCondition& c) {
    BoundarySpec b;
    for (auto& ax : b.face) ax = {c, c};
    return b;
  }
  static BoundarySpec no_flux() { return uniform(FaceCondition{}); }
};

/// Macroscopic fields on a structured grid (cell-centered).
struct MacroState {
  StructuredGrid grid;
  Vec c_plus, c_minus, phi;
  double time = 0.0;

  static MacroState uniform(const StructuredGrid& g, double cp, double cm, double ph = 0.0) {
    MacroState s;
    s.grid = g;
    const size_t n = static_cast<size_t>(g.cell_count());
    s.c_plus.assign(n, cp);
    s.c_minus.assign(n, cm);
    s.phi.assign(n, ph);
    return s;
  }
};

struct SaltChargeState {
  StructuredGrid grid;
  Vec c, rho, phi;
  double time = 0.0;
};

/// Reference scales of the nondimensionalization and the macroscopic
/// rescaling eps_bar = r eps, x_bar = r x, t_bar = r^2 t.
struct ScaleSet {
  double ell = 1.0;             // pore length scale
  double c_bar = 1.0;           // reference concentration
  double thermal_voltage = 1.0; // kT/e
  double diffusivity = 1.0;     // molecular D defining t_D
  double epsilon = 0.1;         // lambda_D / ell
  double r = 1.0;               // scale separation parameter
  double L = 1.0;               // macro length ell / r
  double t_D = 1.0;             // ell^2 / D
  double eps_bar = 0.1;         // r * epsilon
};

ScaleSet rescale_macro(const ScaleSet& s, double r);
inline double macro_time(double t_tilde, double r) { return r * r * t_tilde; }
inline double macro_coord(double x_tilde, double r) { return r * x_tilde; }

struct StepOptions {
  double linear_tol = 1e-13;
  int max_linear_iter = 20000;
  double poisson_compat_tol = 1e-8;
  double negative_guard = 1e-11;  // relative clamp window below zero
};

struct StepStats {
  int poisson_iterations = 0;
  int transport_iterations = 0;
  double poisson_residual = 0.0;
  double transport_residual = 0.0;
};

/// One semi-implicit step of the upscaled PNP system: Poisson solved with the
/// current charge, then both species advanced implicitly with exponentially
/// fitted drift-diffusion faces and the potential lagged.
///
/// Lagging the potential bounds the stable step by the dielectric relaxation
/// time, dt < ~ eps_hat / (c p M_hat); beyond it the charge oscillates with
/// period two. Steady problems in that regime belong to steady_state, whose
/// damped Gummel iteration is not step-limited.
MacroState step_macro_pnp(const MacroState& state, const EffectiveTensors& t,
                          const BoundarySpec& bc, double dt,
                          const StepOptions& opts = {}, StepStats* stats = nullptr);

SaltChargeState to_salt_charge(const MacroState& s);
MacroState from_salt_charge(const SaltChargeState& s);

/// One step of the equivalent salt/charge system, assembled and solved as a
/// coupled block system in (c, rho).
MacroState step_salt_charge(const MacroState& state, const EffectiveTensors& t,
                            const BoundarySpec& bc, double dt,
                            const StepOptions& opts = {}, StepStats* stats = nullptr);

struct SteadyOptions {
  bool frozen_phi = false;
  double damping = 0.5;
  int max_outer = 400;
  double pseudo_dt0 = 1.0;
  double pseudo_dt_growth = 10.0;
  // Large pseudo-steps make the transport systems increasingly
  // ill-conditioned; the cap trades per-iteration contraction for solvable
  // systems, with the outer loop providing the remaining reduction.
  double pseudo_dt_max = 1e3;
  StepOptions step{1e-11, 20000, 1e-8, 1e-11};
};

/// Damped Gummel iteration alternating Poisson and pseudo-transient transport
/// solves until the steady residuals of all equations fall below tol.
MacroState steady_state(const MacroState& state, const EffectiveTensors& t,
                        const BoundarySpec& bc, double tol,
                        const SteadyOptions& opts = {});

/// Residuals of the three steady equations, max norm per unit volume.
struct MacroResiduals {
  double poisson = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  double max() const { return std::max(poisson, std::max(c_plus, c_minus)); }
};
MacroResiduals macro_residuals(const MacroState& state, const EffectiveTensors& t,
                               const BoundarySpec& bc);

/// Total species content sum(c V) (the conserved discrete mass under
/// blocking boundaries).
double species_total(const StructuredGrid& g, const Vec& c);

/// Diagonal of a d x d tensor; throws if significant off-diagonal coupling
/// is present (the face scheme is per-axis).
std::array<double, 3> diagonal_entries(const Mat& m, const char* what);

} // namespace pnph

#endif
