#include "pnph/tensors.hpp"

#include <cmath>
#include <string>

#include "pnph/errors.hpp"
#include "pnph/fvpoisson.hpp"

namespace pnph {

namespace {

FvPoisson family_operator(const ReferenceCell& cell, TensorFamily family) {
  const StructuredGrid& g = cell.grid();
  const index_t n = g.cell_count();
  if (family == TensorFamily::Permittivity) {
    const double eps2 = cell.epsilon() * cell.epsilon();
    Vec kappa(static_cast<size_t>(n), 0.0);
    std::vector<std::uint8_t> active;
    if (cell.alpha() > 0.0) {
      for (index_t i = 0; i < n; ++i)
        kappa[static_cast<size_t>(i)] = cell.pore(i) ? eps2 : cell.alpha();
    } else {
      active.assign(static_cast<size_t>(n), 0);
      for (index_t i = 0; i < n; ++i)
        if (cell.pore(i)) {
          active[static_cast<size_t>(i)] = 1;
          kappa[static_cast<size_t>(i)] = eps2;
        }
    }
    return FvPoisson::periodic(g, std::move(kappa), std::move(active));
  }
  std::vector<std::uint8_t> active(static_cast<size_t>(n), 0);
  for (index_t i = 0; i < n; ++i)
    if (cell.pore(i)) active[static_cast<size_t>(i)] = 1;
  return FvPoisson::periodic(g, Vec(static_cast<size_t>(n), 1.0), std::move(active));
}

} // namespace

Mat assemble_tensor(const ReferenceCell& cell, const std::vector<CorrectorField>& correctors,
                    TensorFamily family,
                    const std::vector<CorrectorField>* wall_correctors) {
  const int d = cell.dim();
  if (static_cast<int>(correctors.size()) != d)
    throw ConfigError("assemble_tensor: need one corrector per direction");
  const CorrectorFamily expected =
      (family == TensorFamily::Diffusion) ? CorrectorFamily::Ion : CorrectorFamily::Potential;
  for (int r = 0; r < d; ++r) {
    if (correctors[r].family != expected)
      throw ConfigError("assemble_tensor: corrector family mismatch");
    if (correctors[r].direction != r)
      throw ConfigError("assemble_tensor: correctors must be ordered by direction");
    if (correctors[r].values.size() != static_cast<size_t>(cell.grid().cell_count()))
      throw ConfigError("assemble_tensor: corrector grid mismatch");
  }

  const FvPoisson op = family_operator(cell, family);
  const StructuredGrid& g = cell.grid();
  const index_t n = g.cell_count();
  Mat m(d, d);
  // Mean face flux of the corrected fields w_l = y_l - xi_l; the contribution
  // of a face orthogonal to axis k is T * h_k * (h_k delta_kl - jump(xi_l)).
  for (int k = 0; k < d; ++k) {
    const double hk = g.spacing(k);
    for (index_t i = 0; i < n; ++i) {
      const double t = op.tplus(k, i);
      if (t == 0.0) continue;
      const index_t j = op.neighbor_plus(k, i);
      for (int l = 0; l < d; ++l) {
        const double jump_y = (l == k) ? hk : 0.0;
        const double jump_xi = correctors[l].values[static_cast<size_t>(j)] -
                               correctors[l].values[static_cast<size_t>(i)];
        m(k, l) += t * hk * (jump_y - jump_xi);
      }
    }
  }

  // Interface half-cell closure for the pore-restricted families.
  if (family != TensorFamily::Permittivity) {
    const std::vector<CorrectorField>* wc =
        (family == TensorFamily::Mobility) ? &correctors : wall_correctors;
    const double eps2 = cell.epsilon() * cell.epsilon();
    const double alpha = cell.alpha();
    if (wc && alpha > 0.0) {
      const double kappa_f = 2.0 * eps2 * alpha / (eps2 + alpha);
      for (const InterfaceFacet& f : cell.facets()) {
        const int k = f.axis;
        const double hk = g.spacing(k);
        const double A = g.face_area(k);
        const index_t i = f.cell;
        const index_t j = g.periodic_neighbor(i, k, f.dir);
        for (int l = 0; l < d; ++l) {
          // jump oriented along +k regardless of the facet side
          const double jump_y = (l == k) ? hk : 0.0;
          const double xi_i = (*wc)[l].values[static_cast<size_t>(i)];
          const double xi_j = (*wc)[l].values[static_cast<size_t>(j)];
          const double jump_w =
              (f.dir > 0) ? (jump_y - (xi_j - xi_i)) : (jump_y - (xi_i - xi_j));
          // pore-side gradient from the continuous face flux, over h/2
          m(k, l) += 0.5 * (kappa_f / eps2) * A * jump_w;
        }
      }
    }
  }

  const double inv_vol = 1.0 / g.volume();
  for (double& v : m.a) v *= inv_vol;
  return m;
}

EffectiveTensors compute_effective_tensors(const ReferenceCell& cell, double tol) {
  const int d = cell.dim();
  std::vector<CorrectorField> xi33(static_cast<size_t>(d));
  std::vector<CorrectorField> xi_ion(static_cast<size_t>(d));
  for (int r = 0; r < d; ++r) {
    xi33[static_cast<size_t>(r)] = solve_potential_corrector(cell, r, tol);
    xi_ion[static_cast<size_t>(r)] = solve_ion_corrector(cell, r, xi33[static_cast<size_t>(r)], tol);
  }
  EffectiveTensors t;
  t.D_hat = assemble_tensor(cell, xi_ion, TensorFamily::Diffusion, &xi33);
  t.M_hat = assemble_tensor(cell, xi33, TensorFamily::Mobility);
  t.eps_hat = assemble_tensor(cell, xi33, TensorFamily::Permittivity);
  t.p = porosity(cell);
  t.rho_s = homogenized_surface_charge(cell);
  t.epsilon = cell.epsilon();
  t.alpha = cell.alpha();
  return t;
}

Mat material_tensor(const EffectiveTensors& t, const std::array<double, 3>& Q) {
  const int d = t.dim();
  for (double q : Q)
    if (!std::isfinite(q)) throw ConfigError("material_tensor: Q must be finite");
  Mat s(3 * d, 3 * d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      s(k, l) = t.D_hat(k, l);
      s(k, 2 * d + l) = Q[1] * t.M_hat(k, l);
      s(d + k, d + l) = t.D_hat(k, l);
      s(d + k, 2 * d + l) = -Q[0] * t.M_hat(k, l);
      s(2 * d + k, 2 * d + l) = t.eps_hat(k, l);
    }
  }
  return s;
}

SpeciesFluxes fluxes(const EffectiveTensors& t, const std::array<double, 3>& Q,
                     const std::vector<double>& grad_c_plus,
                     const std::vector<double>& grad_c_minus,
                     const std::vector<double>& grad_phi) {
  const int d = t.dim();
  if (static_cast<int>(grad_c_plus.size()) != d ||
      static_cast<int>(grad_c_minus.size()) != d ||
      static_cast<int>(grad_phi.size()) != d)
    throw ConfigError("fluxes: gradient dimension mismatch");
  SpeciesFluxes f;
  const std::vector<double> mphi = t.M_hat * grad_phi;
  f.j_plus = t.D_hat * grad_c_plus;
  f.j_minus = t.D_hat * grad_c_minus;
  f.j_phi = t.eps_hat * grad_phi;
  for (int k = 0; k < d; ++k) {
    f.j_plus[static_cast<size_t>(k)] += Q[0] * mphi[static_cast<size_t>(k)];
    f.j_minus[static_cast<size_t>(k)] -= Q[1] * mphi[static_cast<size_t>(k)];
  }
  return f;
}

CoordinateTransform coordinate_transform(const Mat& D_hat, double zero_tol) {
  const int d = D_hat.rows;
  const SymEig eig = sym_eig(D_hat);
  // Order the eigenpairs by the dominant component of each eigenvector so
  // that for (near-)diagonal tensors the flags line up with the grid axes.
  std::vector<int> order(static_cast<size_t>(d));
  std::vector<bool> taken(static_cast<size_t>(d), false);
  for (int j = 0; j < d; ++j) {
    int best_axis = -1;
    double best = -1.0;
    for (int k = 0; k < d; ++k) {
      if (taken[static_cast<size_t>(k)]) continue;
      if (std::abs(eig.vectors(k, j)) > best) {
        best = std::abs(eig.vectors(k, j));
        best_axis = k;
      }
    }
    taken[static_cast<size_t>(best_axis)] = true;
    order[static_cast<size_t>(best_axis)] = j;
  }
  CoordinateTransform ct;
  ct.eigenvalues.resize(static_cast<size_t>(d));
  ct.eigenvectors = Mat(d, d);
  ct.parameter_axis.assign(static_cast<size_t>(d), false);
  Mat scale(d, d);
  for (int k = 0; k < d; ++k) {
    const int j = order[static_cast<size_t>(k)];
    ct.eigenvalues[static_cast<size_t>(k)] = eig.values[static_cast<size_t>(j)];
    for (int i = 0; i < d; ++i) ct.eigenvectors(i, k) = eig.vectors(i, j);
    if (eig.values[static_cast<size_t>(j)] <= zero_tol) {
      ct.parameter_axis[static_cast<size_t>(k)] = true;  // treated as a parameter
    } else {
      scale(j, j) = 1.0 / std::sqrt(eig.values[static_cast<size_t>(j)]);
    }
  }
  ct.inv_sqrt = eig.vectors * scale * eig.vectors.transposed();
  return ct;
}

DimensionalTensors dimensionalize(const EffectiveTensors& t, double D_plus, double D_minus,
                                  double kT) {
  if (D_plus <= 0.0 || D_minus <= 0.0 || kT <= 0.0)
    throw ConfigError("dimensionalize: molecular diffusivities and kT must be positive");
  DimensionalTensors r;
  r.D_plus = D_plus * t.D_hat;
  r.D_minus = D_minus * t.D_hat;
  r.M_plus = (D_plus / kT) * t.M_hat;
  r.M_minus = (D_minus / kT) * t.M_hat;
  return r;
}

TortuosityResult tortuosity(const EffectiveTensors& t, TortuosityVariant variant,
                            std::optional<double> d_constrictivity,
                            double molecular_diffusivity) {
  if (variant == TortuosityVariant::Constrictivity && !d_constrictivity)
    throw ConfigError("tortuosity: CONSTRICTIVITY variant needs d_constrictivity");
  const int d = t.dim();
  const double zero_tol = 1e-12;
  TortuosityResult r;
  r.tau = Mat(d, d);
  r.diffusibility = Mat(d, d);
  r.blocked.assign(static_cast<size_t>(d) * d, 0);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      const double df = (k == l) ? molecular_diffusivity : 0.0;
      const double dp = molecular_diffusivity * t.D_hat(k, l);
      if (std::abs(df) <= zero_tol) continue;  // no free-space entry, nothing to relate
      if (std::abs(dp) <= zero_tol) {
        r.blocked[static_cast<size_t>(k) * d + l] = 1;  // "infinity" entry
        continue;
      }
      const double ratio = df / dp;
      switch (variant) {
        case TortuosityVariant::Petersen:
          r.tau(k, l) = std::sqrt(ratio);
          r.diffusibility(k, l) = 1.0 / (ratio);
          break;
        case TortuosityVariant::ArisSatterfield:
          r.tau(k, l) = t.p * ratio;
          r.diffusibility(k, l) = t.p / r.tau(k, l);
          break;
        case TortuosityVariant::Constrictivity: {
          const double pd = t.p * (*d_constrictivity);
          r.tau(k, l) = std::sqrt(pd * ratio);
          r.diffusibility(k, l) = pd / (r.tau(k, l) * r.tau(k, l));
          break;
        }
      }
    }
  }
  return r;
}

double path_tortuosity(const std::vector<double>& path_lengths, double endpoint_distance) {
  if (path_lengths.empty()) throw ConfigError("path_tortuosity: empty path list");
  if (endpoint_distance <= 0.0)
    throw ConfigError("path_tortuosity: endpoint distance must be positive");
  double sum = 0.0;
  for (double len : path_lengths) {
    if (len < endpoint_distance * (1.0 - 1e-12))
      throw ConfigError("path_tortuosity: path shorter than the endpoint distance");
    sum += len;
  }
  return sum / (static_cast<double>(path_lengths.size()) * endpoint_distance);
}

} // namespace pnph
