#include "pnph/app.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "pnph/conductivity.hpp"
#include "pnph/errors.hpp"
#include "pnph/io.hpp"
#include "pnph/limits.hpp"
#include "pnph/micro.hpp"
#include "pnph/tensors.hpp"

namespace pnph {

namespace {

const std::set<std::string> kModels = {"cell",    "macro",      "micro",
                                       "thin_dl", "membrane",   "thin_film",
                                       "ambipolar", "conductivity", "compare"};

FaceCondition parse_face_condition(const json& j) {
  FaceCondition fc;
  const std::string type = j.value("type", "no_flux");
  if (type == "no_flux")
    fc.type = FaceConditionType::NoFlux;
  else if (type == "dirichlet")
    fc.type = FaceConditionType::Dirichlet;
  else if (type == "applied_current")
    fc.type = FaceConditionType::AppliedCurrent;
  else if (type == "grounded")
    fc.type = FaceConditionType::Grounded;
  else
    throw ConfigError("unknown boundary condition type: " + type);
  fc.c_plus = j.value("c_plus", 1.0);
  fc.c_minus = j.value("c_minus", 1.0);
  fc.phi = j.value("phi", 0.0);
  fc.current = j.value("current", 0.0);
  return fc;
}

BoundarySpec parse_bc(const json& run, int dim) {
  BoundarySpec bc;
  if (!run.contains("bc")) return bc;
  const json& j = run.at("bc");
  if (j.contains("all")) {
    const FaceCondition fc = parse_face_condition(j.at("all"));
    return BoundarySpec::uniform(fc);
  }
  const char* names[3][2] = {{"x_lo", "x_hi"}, {"y_lo", "y_hi"}, {"z_lo", "z_hi"}};
  for (int a = 0; a < dim; ++a)
    for (int s = 0; s < 2; ++s)
      if (j.contains(names[a][s]))
        bc.face[a][static_cast<size_t>(s)] = parse_face_condition(j.at(names[a][s]));
  return bc;
}

StructuredGrid parse_grid(const json& run) {
  if (!run.contains("grid")) throw ConfigError("run section needs a 'grid'");
  const json& j = run.at("grid");
  const auto dims_j = j.at("dims");
  const int dim = static_cast<int>(dims_j.size());
  if (dim < 1 || dim > 3) throw ConfigError("grid dims must have 1..3 entries");
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  for (int a = 0; a < dim; ++a) dims[static_cast<size_t>(a)] = dims_j.at(a).get<int>();
  if (j.contains("lengths"))
    for (int a = 0; a < dim; ++a)
      lengths[static_cast<size_t>(a)] = j.at("lengths").at(a).get<double>();
  return StructuredGrid(dim, dims, lengths);
}

MacroState parse_initial_state(const json& run, const StructuredGrid& g,
                               const EffectiveTensors& t) {
  const json init = run.value("init", json{{"kind", "uniform"}});
  const std::string kind = init.value("kind", "uniform");
  MacroState s = MacroState::uniform(g, init.value("c_plus", 1.0),
                                     init.value("c_minus", 1.0));
  if (kind == "uniform") return s;
  if (kind == "gaussian_salt") {
    const double base = init.value("base", 1.0);
    const double amp = init.value("amplitude", 0.1);
    const double width = init.value("width", 0.1);
    const double center = init.value("center", 0.5);
    const bool balanced = init.value("charge_balanced", true);
    const double shift = balanced ? -t.rho_s / (2.0 * t.p) : 0.0;
    for (index_t i = 0; i < g.cell_count(); ++i) {
      const auto c = g.coords(i);
      const double x = g.center(0, c[0]);
      const double salt = base + amp * std::exp(-std::pow((x - center) / width, 2));
      s.c_plus[static_cast<size_t>(i)] = salt + shift;
      s.c_minus[static_cast<size_t>(i)] = salt - shift;
    }
    return s;
  }
  throw ConfigError("unknown init kind: " + kind);
}

void write_manifest(const RunConfig& cfg) {
  json manifest{{"tool", kToolVersion}, {"model", cfg.model}, {"config", cfg.raw}};
  write_json_file(cfg.out_dir + "/manifest.json", manifest);
}

EffectiveTensors tensors_from_run(const RunConfig& cfg) {
  if (cfg.run.contains("tensors")) {
    // Closed-form tensors supplied directly (e.g. straight-channel diag(p, 0)).
    const json& j = cfg.run.at("tensors");
    const auto d = j.at("D_diag");
    const int dim = static_cast<int>(d.size());
    EffectiveTensors t;
    t.D_hat = Mat(dim, dim);
    for (int a = 0; a < dim; ++a) t.D_hat(a, a) = d.at(a).get<double>();
    t.M_hat = t.D_hat;
    t.p = j.value("p", 1.0);
    t.rho_s = j.value("rho_s", 0.0);
    t.epsilon = j.value("epsilon", 0.1);
    t.alpha = 0.0;
    t.eps_hat = (t.epsilon * t.epsilon) * t.D_hat;
    if (j.contains("M_diag"))
      for (int a = 0; a < dim; ++a) t.M_hat(a, a) = j.at("M_diag").at(a).get<double>();
    if (j.contains("eps_diag"))
      for (int a = 0; a < dim; ++a)
        t.eps_hat(a, a) = j.at("eps_diag").at(a).get<double>();
    return t;
  }
  const ReferenceCell cell = build_geometry(cfg);
  return compute_effective_tensors(cell, cfg.tol);
}

void run_cell_model(const RunConfig& cfg) {
  const ReferenceCell cell = build_geometry(cfg);
  const EffectiveTensors t = compute_effective_tensors(cell, cfg.tol);
  write_json_file(cfg.out_dir + "/tensors.json", tensor_report(t));

  if (cfg.run.value("dump_correctors", false)) {
    for (int r = 0; r < cell.dim(); ++r) {
      const CorrectorField xi33 = solve_potential_corrector(cell, r, cfg.tol);
      const CorrectorField xii = solve_ion_corrector(cell, r, xi33, cfg.tol);
      write_text_file(cfg.out_dir + "/xi_potential_r" + std::to_string(r + 1) + ".csv",
                      corrector_csv(cell.grid(), xi33));
      write_text_file(cfg.out_dir + "/xi_ion_r" + std::to_string(r + 1) + ".csv",
                      corrector_csv(cell.grid(), xii));
    }
  }
  if (cfg.run.contains("refine") && cfg.preset) {
    std::string csv = "n,p,d11,d11_over_p\n";
    for (const auto& nj : cfg.run.at("refine")) {
      auto params = cfg.preset_params;
      params["n"] = nj.get<double>();
      params["sigma"] = cfg.sigma;
      params["epsilon"] = cfg.epsilon;
      params["alpha"] = cfg.alpha;
      const ReferenceCell rc = build_preset(*cfg.preset, params);
      const EffectiveTensors rt = compute_effective_tensors(rc, cfg.tol);
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g\n", nj.get<int>(), rt.p,
                    rt.D_hat(0, 0), rt.D_hat(0, 0) / rt.p);
      csv += buf;
    }
    write_text_file(cfg.out_dir + "/refinement.csv", csv);
  }
}

void write_series_and_summary(const RunConfig& cfg, const std::string& model,
                              const std::vector<MacroState>& series,
                              const json& extra_summary = json::object()) {
  std::string csv = series_csv_header(series.front().grid.dim);
  for (const MacroState& s : series) append_series_rows(csv, s);
  write_text_file(cfg.out_dir + "/series.csv", csv);
  const MacroState& last = series.back();
  json summary{{"model", model},
               {"snapshots", series.size()},
               {"final_time", last.time},
               {"mass_c_plus", species_total(last.grid, last.c_plus)},
               {"mass_c_minus", species_total(last.grid, last.c_minus)}};
  for (auto it = extra_summary.begin(); it != extra_summary.end(); ++it)
    summary[it.key()] = it.value();
  write_json_file(cfg.out_dir + "/summary.json", summary);
}

void run_macro_model(const RunConfig& cfg) {
  const EffectiveTensors t = tensors_from_run(cfg);
  const StructuredGrid g = parse_grid(cfg.run);
  const BoundarySpec bc = parse_bc(cfg.run, g.dim);
  const double dt = cfg.run.value("dt", 1e-3);
  const int steps = cfg.run.value("steps", 100);
  const int output_every = cfg.run.value("output_every", std::max(1, steps / 10));
  const bool salt_charge = cfg.run.value("variables", std::string("species")) ==
                           std::string("salt_charge");

  MacroState s = parse_initial_state(cfg.run, g, t);
  std::vector<MacroState> series{s};
  for (int k = 0; k < steps; ++k) {
    s = salt_charge ? step_salt_charge(s, t, bc, dt) : step_macro_pnp(s, t, bc, dt);
    if ((k + 1) % output_every == 0 || k + 1 == steps) series.push_back(s);
  }
  const MacroResiduals res = macro_residuals(s, t, bc);
  write_series_and_summary(cfg, "macro", series,
                           json{{"steps", steps},
                                {"steady_residual_poisson", res.poisson},
                                {"steady_residual_c_plus", res.c_plus},
                                {"steady_residual_c_minus", res.c_minus}});
}

void run_micro_model(const RunConfig& cfg) {
  const ReferenceCell cell = build_geometry(cfg);
  const int tiles = cfg.run.value("tiles", 2);
  const BoundarySpec bc = parse_bc(cfg.run, 2);
  const MicroDomain dom = build_perforated_domain(cell, tiles, bc);
  const double dt = cfg.run.value("dt", 1e-3);
  const int steps = cfg.run.value("steps", 50);

  const double c0 = cfg.run.value("c0", 1.0);
  MicroState s = micro_neutral_state(
      dom, Vec(static_cast<size_t>(dom.grid.cell_count()), c0));
  for (int k = 0; k < steps; ++k) s = step_micro_pnp(dom, s, dt);

  std::string csv = "x,y,pore,c_plus,c_minus,phi\n";
  char buf[192];
  for (index_t i = 0; i < dom.grid.cell_count(); ++i) {
    const auto c = dom.grid.coords(i);
    const int len = std::snprintf(
        buf, sizeof(buf), "%.17g,%.17g,%d,%.17g,%.17g,%.17g\n",
        dom.grid.center(0, c[0]), dom.grid.center(1, c[1]),
        dom.pore_mask[static_cast<size_t>(i)] ? 1 : 0, s.c_plus[static_cast<size_t>(i)],
        s.c_minus[static_cast<size_t>(i)], s.phi[static_cast<size_t>(i)]);
    csv.append(buf, static_cast<size_t>(len));
  }
  write_text_file(cfg.out_dir + "/micro_snapshot.csv", csv);
  write_json_file(cfg.out_dir + "/summary.json",
                  json{{"model", "micro"},
                       {"tiles", tiles},
                       {"steps", steps},
                       {"final_time", s.time},
                       {"ionic_charge", micro_ionic_charge(dom, s)},
                       {"surface_charge", micro_surface_charge(dom)}});
}

void run_thin_dl_model(const RunConfig& cfg) {
  const EffectiveTensors t = tensors_from_run(cfg);
  const StructuredGrid g = parse_grid(cfg.run);
  const BoundarySpec bc = parse_bc(cfg.run, g.dim);
  const double dt = cfg.run.value("dt", 1e-3);
  const int steps = cfg.run.value("steps", 100);
  Vec c0(static_cast<size_t>(g.cell_count()), cfg.run.value("c0", 1.0));
  const auto traj = thin_dl_solve(g, c0, t, bc, dt, steps);

  std::vector<MacroState> series;
  for (const ThinDlState& st : traj) {
    MacroState ms;
    ms.grid = g;
    ms.time = st.time;
    ms.phi = st.phi;
    ms.c_plus.resize(st.c.size());
    ms.c_minus.resize(st.c.size());
    for (size_t i = 0; i < st.c.size(); ++i) {
      ms.c_plus[i] = st.c[i] + st.rho[i];
      ms.c_minus[i] = st.c[i] - st.rho[i];
    }
    series.push_back(ms);
  }
  write_series_and_summary(cfg, "thin_dl", series, json{{"steps", steps}});
}

void run_membrane_model(const RunConfig& cfg) {
  const EffectiveTensors t = tensors_from_run(cfg);
  const StructuredGrid g = parse_grid(cfg.run);
  const BoundarySpec bc = parse_bc(cfg.run, g.dim);
  const double dt = cfg.run.value("dt", 1e-3);
  const int steps = cfg.run.value("steps", 100);
  const double eps_bar = cfg.run.value("eps_bar", 0.1);
  MacroState s = parse_initial_state(cfg.run, g, t);
  std::vector<MacroState> series{s};
  for (int k = 0; k < steps; ++k) {
    s = membrane_step(s, t, eps_bar, bc, dt);
    series.push_back(s);
  }
  write_series_and_summary(cfg, "membrane", series, json{{"steps", steps}});
}

void run_thin_film_model(const RunConfig& cfg) {
  const EffectiveTensors t = tensors_from_run(cfg);
  const StructuredGrid g = parse_grid(cfg.run);
  const BoundarySpec bc = parse_bc(cfg.run, g.dim);
  const Vec phi = thin_film_potential(g, t, bc);
  MacroState s;
  s.grid = g;
  s.phi = phi;
  s.c_plus.assign(phi.size(), 0.0);
  s.c_minus.assign(phi.size(), 0.0);
  write_series_and_summary(cfg, "thin_film", {s});
}

void run_ambipolar_model(const RunConfig& cfg) {
  const EffectiveTensors t = tensors_from_run(cfg);
  const StructuredGrid g = parse_grid(cfg.run);
  const BoundarySpec bc = parse_bc(cfg.run, g.dim);
  const double dt = cfg.run.value("dt", 1e-3);
  const int steps = cfg.run.value("steps", 100);
  const json cj = cfg.run.value("coefficients", json::object());
  const AmbipolarCoefficients coeffs = ambipolar_coefficients(
      cj.value("z_plus", 1.0), cj.value("z_minus", 1.0), cj.value("D_plus", 1.0),
      cj.value("D_minus", 1.0), cj.value("M_plus", 1.0), cj.value("M_minus", 1.0),
      cj.value("kT", 1.0));
  const double e = cfg.run.value("e", 1.0);
  const size_t n = static_cast<size_t>(g.cell_count());
  Vec rho_s(n, cfg.run.value("rho_s", t.rho_s));
  Vec phi(n, 0.0);
  Vec c(n, cfg.run.value("c0", 1.0));
  std::vector<MacroState> series;
  auto snapshot = [&](double time) {
    MacroState s;
    s.grid = g;
    s.time = time;
    s.phi = phi;
    s.c_plus = c;
    s.c_minus = c;
    series.push_back(s);
  };
  snapshot(0.0);
  for (int k = 0; k < steps; ++k) c = ambipolar_step(g, c, coeffs, t, rho_s, phi, dt, e, bc);
  snapshot(steps * dt);
  write_series_and_summary(cfg, "ambipolar", series,
                           json{{"steps", steps},
                                {"D_bar", coeffs.D_bar},
                                {"z_bar", coeffs.z_bar}});
}

void run_conductivity_model(const RunConfig& cfg) {
  const ReferenceCell cell = build_geometry(cfg);
  const double tol = cfg.run.value("eigen_tol", 1e-8);
  const EigenResult eig = first_dirichlet_eigenvalue(cell, tol);
  json report{{"theta_1", eig.theta_1},
              {"residual", eig.residual},
              {"iterations", eig.iterations},
              {"geometry", cfg.preset ? json(*cfg.preset) : json("raster")}};
  if (cfg.preset && *cfg.preset == "rectangle_pore_2d") {
    const double a = cfg.preset_params.count("a") ? cfg.preset_params.at("a") : 1.0;
    const double b = cfg.preset_params.count("b") ? cfg.preset_params.at("b") : a;
    const double h = cheeger_rectangle(a, b);
    report["cheeger_h"] = h;
    report["theta_lower_bound"] = cheeger_lower_bound(h);
  }
  if (cfg.run.contains("estimate")) {
    const json& ej = cfg.run.at("estimate");
    report["sigma_estimate"] =
        conductivity_estimate(porosity(cell), cell.epsilon(), ej.value("s", 1.0),
                              eig.theta_1, ej.value("c", 1.0));
  }
  write_json_file(cfg.out_dir + "/conductivity.json", report);
}

void run_compare_model(const RunConfig& cfg) {
  const ReferenceCell cell = build_geometry(cfg);
  const EffectiveTensors t = compute_effective_tensors(cell, cfg.tol);
  const double dt = cfg.run.value("dt", 2e-3);
  const int steps = cfg.run.value("steps", 40);
  const int macro_n = cfg.run.value("macro_n", 144);
  const double amp = cfg.run.value("amplitude", 0.2);
  std::vector<int> tile_counts{2, 4};
  if (cfg.run.contains("tiles")) {
    tile_counts.clear();
    for (const auto& v : cfg.run.at("tiles")) tile_counts.push_back(v.get<int>());
  }

  const BoundarySpec bc = BoundarySpec::no_flux();
  const double pi = 3.14159265358979323846;

  // Macro reference run on its own fine grid.
  StructuredGrid mg(2, {macro_n, macro_n, 1}, {1.0, 1.0, 1.0});
  MacroState ms = MacroState::uniform(mg, 1.0, 1.0);
  const double shift = -t.rho_s / (2.0 * t.p);
  for (index_t i = 0; i < mg.cell_count(); ++i) {
    const auto c = mg.coords(i);
    const double salt = 1.0 + amp * std::cos(pi * mg.center(0, c[0]));
    ms.c_plus[static_cast<size_t>(i)] = salt + shift;
    ms.c_minus[static_cast<size_t>(i)] = salt - shift;
  }
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < steps; ++k) ms = step_macro_pnp(ms, t, bc, dt);
  const double macro_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json runs = json::array();
  for (int n : tile_counts) {
    const MicroDomain dom = build_perforated_domain(cell, n, bc);
    Vec salt(static_cast<size_t>(dom.grid.cell_count()), 1.0);
    for (index_t i = 0; i < dom.grid.cell_count(); ++i) {
      const auto c = dom.grid.coords(i);
      salt[static_cast<size_t>(i)] = 1.0 + amp * std::cos(pi * dom.grid.center(0, c[0]));
    }
    MicroState micro = micro_neutral_state(dom, salt);
    const auto t1 = std::chrono::steady_clock::now();
    for (int k = 0; k < steps; ++k) micro = step_micro_pnp(dom, micro, dt);
    const double micro_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();

    const MacroState avg = cell_average(dom, micro);
    // Macro fields averaged onto the n x n tile grid for the L2 comparison.
    const int block = macro_n / n;
    if (block * n != macro_n)
      throw ConfigError("compare: macro_n must be divisible by every tile count");
    double l2_c = 0.0, l2_phi = 0.0;
    double macro_phi_mean = 0.0, micro_phi_mean = 0.0;
    std::vector<double> mc(avg.c_plus.size(), 0.0), mphi(avg.c_plus.size(), 0.0);
    for (index_t i = 0; i < mg.cell_count(); ++i) {
      const auto c = mg.coords(i);
      const size_t tile = static_cast<size_t>(avg.grid.index(c[0] / block, c[1] / block, 0));
      mc[tile] += 0.5 * (ms.c_plus[static_cast<size_t>(i)] +
                         ms.c_minus[static_cast<size_t>(i)]);
      mphi[tile] += ms.phi[static_cast<size_t>(i)];
    }
    for (size_t i = 0; i < mc.size(); ++i) {
      mc[i] /= block * block;
      mphi[i] /= block * block;
      macro_phi_mean += mphi[i];
    }
    macro_phi_mean /= static_cast<double>(mc.size());
    for (size_t i = 0; i < avg.phi.size(); ++i) micro_phi_mean += avg.phi[i];
    micro_phi_mean /= static_cast<double>(avg.phi.size());
    const double tile_vol = avg.grid.cell_volume();
    for (size_t i = 0; i < mc.size(); ++i) {
      const double salt_avg = 0.5 * (avg.c_plus[i] + avg.c_minus[i]);
      l2_c += (salt_avg - mc[i]) * (salt_avg - mc[i]) * tile_vol;
      const double dphi = (avg.phi[i] - micro_phi_mean) - (mphi[i] - macro_phi_mean);
      l2_phi += dphi * dphi * tile_vol;
    }
    runs.push_back(json{{"n", n},
                        {"L2_c", std::sqrt(l2_c)},
                        {"L2_phi", std::sqrt(l2_phi)},
                        {"micro_seconds", micro_seconds}});
  }
  write_json_file(cfg.out_dir + "/compare.json",
                  json{{"model", "compare"},
                       {"macro_seconds", macro_seconds},
                       {"steps", steps},
                       {"dt", dt},
                       {"runs", runs}});
}

} // namespace

RunConfig parse_config_json(const json& j) {
  RunConfig cfg;
  cfg.raw = j;
  if (!j.contains("geometry") && !j.contains("run"))
    throw ConfigError("config needs 'geometry' and/or 'run' sections");
  if (j.contains("geometry")) {
    const json& gj = j.at("geometry");
    if (gj.contains("preset")) cfg.preset = gj.at("preset").get<std::string>();
    if (gj.contains("raster")) cfg.raster_path = gj.at("raster").get<std::string>();
    if (gj.contains("params"))
      for (auto it = gj.at("params").begin(); it != gj.at("params").end(); ++it)
        cfg.preset_params[it.key()] = it.value().get<double>();
    cfg.sigma = gj.value("sigma", 0.0);
    cfg.epsilon = gj.value("epsilon", 0.1);
    cfg.alpha = gj.value("alpha", 0.0);
  }
  if (j.contains("solver")) cfg.tol = j.at("solver").value("tol", 1e-11);
  if (!j.contains("run")) throw ConfigError("config needs a 'run' section");
  cfg.run = j.at("run");
  if (!cfg.run.contains("model")) throw ConfigError("run section needs a 'model'");
  cfg.model = cfg.run.at("model").get<std::string>();
  if (j.contains("output")) cfg.out_dir = j.at("output").value("directory", "out");
  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config_json(j);
}

void validate_config(const RunConfig& cfg) {
  if (!kModels.count(cfg.model)) throw ConfigError("unknown model: " + cfg.model);
  if (cfg.tol <= 0.0) throw ConfigError("solver tol must be positive");
  if (cfg.preset && cfg.raster_path)
    throw ConfigError("geometry: give either a preset or a raster, not both");
  const bool needs_geometry = cfg.model == "cell" || cfg.model == "micro" ||
                              cfg.model == "conductivity" || cfg.model == "compare";
  if (needs_geometry && !cfg.preset && !cfg.raster_path)
    throw ConfigError("model '" + cfg.model + "' needs a geometry section");
  if (cfg.raster_path && !std::filesystem::exists(*cfg.raster_path))
    throw ConfigError("raster file does not exist: " + *cfg.raster_path);
  if (cfg.run.contains("dt") && cfg.run.at("dt").get<double>() <= 0.0)
    throw ConfigError("dt must be positive");
  if (cfg.run.contains("steps") && cfg.run.at("steps").get<int>() < 0)
    throw ConfigError("steps must be nonnegative");
}

ReferenceCell build_geometry(const RunConfig& cfg) {
  if (cfg.preset) {
    auto params = cfg.preset_params;
    params.emplace("sigma", cfg.sigma);
    params.emplace("epsilon", cfg.epsilon);
    params.emplace("alpha", cfg.alpha);
    return build_preset(*cfg.preset, params);
  }
  if (cfg.raster_path) return load_raster(*cfg.raster_path, cfg.epsilon, cfg.alpha);
  throw ConfigError("no geometry configured");
}

void run_config(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  if (cfg.model == "cell")
    run_cell_model(cfg);
  else if (cfg.model == "macro")
    run_macro_model(cfg);
  else if (cfg.model == "micro")
    run_micro_model(cfg);
  else if (cfg.model == "thin_dl")
    run_thin_dl_model(cfg);
  else if (cfg.model == "membrane")
    run_membrane_model(cfg);
  else if (cfg.model == "thin_film")
    run_thin_film_model(cfg);
  else if (cfg.model == "ambipolar")
    run_ambipolar_model(cfg);
  else if (cfg.model == "conductivity")
    run_conductivity_model(cfg);
  else if (cfg.model == "compare")
    run_compare_model(cfg);
  write_manifest(cfg);
}

} // namespace pnph
