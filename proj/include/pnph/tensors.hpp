#ifndef PNPH_TENSORS_HPP
#define PNPH_TENSORS_HPP

#include <array>
#include <optional>
#include <vector>

#include "pnph/correctors.hpp"
#include "pnph/geometry.hpp"
#include "pnph/linalg.hpp"

namespace pnph {

/// Upscaled coefficients of the porous-media PNP system: diffusion corrector
/// D_hat, mobility corrector M_hat, permittivity tensor eps_hat, porosity p
/// and homogenized surface charge rho_s.
struct EffectiveTensors {
  Mat D_hat;
  Mat M_hat;
  Mat eps_hat;
  double p = 0.0;
  double rho_s = 0.0;
  double epsilon = 0.0;
  double alpha = 0.0;

  int dim() const { return D_hat.rows; }
};

enum class TensorFamily { Diffusion, Mobility, Permittivity };

/// Volume-averaged tensor entries from the discrete corrector gradients,
/// quadrature matched to the finite-volume faces of the cell solves.
/// `correctors[r]` must hold the corrector for direction r; Diffusion expects
/// the ion family, Mobility and Permittivity the potential family.
///
/// The pore-phase integrals close the half-cells at the interface with the
/// pore-side gradient taken from the potential corrector's interface flux
/// (the ion corrector's Neumann datum); for the Diffusion family pass the
/// potential correctors as `wall_correctors`. With an insulating matrix the
/// closure vanishes identically.
Mat assemble_tensor(const ReferenceCell& cell, const std::vector<CorrectorField>& correctors,
                    TensorFamily family,
                    const std::vector<CorrectorField>* wall_correctors = nullptr);

/// Runs all corrector solves for the cell and assembles D_hat, M_hat, eps_hat
/// together with porosity and rho_s.
EffectiveTensors compute_effective_tensors(const ReferenceCell& cell, double tol = 1e-11);

/// Effective material tensor S(Q) as a (3d)x(3d) block matrix
/// [D 0 Q2*M; 0 D -Q1*M; 0 0 eps] for the field vector Q = (c+, c-, phi).
Mat material_tensor(const EffectiveTensors& t, const std::array<double, 3>& Q);

struct SpeciesFluxes {
  std::vector<double> j_plus, j_minus, j_phi;
};

/// J_c+- = D grad c+- +- c+- M grad phi,  J_phi = eps grad phi.
SpeciesFluxes fluxes(const EffectiveTensors& t, const std::array<double, 3>& Q,
                     const std::vector<double>& grad_c_plus,
                     const std::vector<double>& grad_c_minus,
                     const std::vector<double>& grad_phi);

/// x_tilde = D_hat^{-1/2} x via symmetric eigendecomposition; eigenvalues
/// below `zero_tol` are flagged as parameter axes (the blocked directions).
struct CoordinateTransform {
  Mat inv_sqrt;
  std::vector<bool> parameter_axis;
  std::vector<double> eigenvalues;
  Mat eigenvectors;
};

CoordinateTransform coordinate_transform(const Mat& D_hat, double zero_tol = 1e-12);

struct DimensionalTensors {
  Mat D_plus, D_minus, M_plus, M_minus;
};

/// Dimensional effective coefficients D+- * D_hat and M+- * M_hat with the
/// Einstein mobilities M+- = D+-/kT.
DimensionalTensors dimensionalize(const EffectiveTensors& t, double D_plus, double D_minus,
                                  double kT);

enum class TortuosityVariant { Petersen, ArisSatterfield, Constrictivity };

/// Componentwise tortuosity tensor and diffusibility for the chosen variant;
/// entries with vanishing effective diffusivity against a nonzero free-space
/// entry are flagged blocked (the "infinity" option).
struct TortuosityResult {
  Mat tau;
  Mat diffusibility;
  std::vector<std::uint8_t> blocked;  // row-major d*d flags

  bool is_blocked(int k, int l) const {
    return blocked[static_cast<size_t>(k) * static_cast<size_t>(tau.cols) + l] != 0;
  }
};

TortuosityResult tortuosity(const EffectiveTensors& t, TortuosityVariant variant,
                            std::optional<double> d_constrictivity = std::nullopt,
                            double molecular_diffusivity = 1.0);

/// Mean path length over the endpoint distance.
double path_tortuosity(const std::vector<double>& path_lengths, double endpoint_distance);

} // namespace pnph

#endif
