#include "pnph/io.hpp"

#include <cstdio>
#include <fstream>

#include "pnph/errors.hpp"

namespace pnph {

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

namespace {
json tortuosity_entry(const EffectiveTensors& t, TortuosityVariant v) {
  const TortuosityResult r = tortuosity(t, v, v == TortuosityVariant::Constrictivity
                                               ? std::optional<double>(1.0)
                                               : std::nullopt);
  json blocked = json::array();
  for (auto b : r.blocked) blocked.push_back(b != 0);
  return json{{"tau", mat_to_json(r.tau)},
              {"diffusibility", mat_to_json(r.diffusibility)},
              {"blocked", blocked}};
}
} // namespace

json tensor_report(const EffectiveTensors& t) {
  return json{{"p", t.p},
              {"rho_s", t.rho_s},
              {"epsilon", t.epsilon},
              {"alpha", t.alpha},
              {"D_hat", mat_to_json(t.D_hat)},
              {"M_hat", mat_to_json(t.M_hat)},
              {"eps_hat", mat_to_json(t.eps_hat)},
              {"tortuosity",
               json{{"petersen", tortuosity_entry(t, TortuosityVariant::Petersen)},
                    {"aris_satterfield",
                     tortuosity_entry(t, TortuosityVariant::ArisSatterfield)}}}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string series_csv_header(int dim) {
  std::string h = "t,x";
  if (dim >= 2) h += ",y";
  if (dim >= 3) h += ",z";
  h += ",c_plus,c_minus,phi\n";
  return h;
}

void append_series_rows(std::string& csv, const MacroState& s) {
  const StructuredGrid& g = s.grid;
  char buf[256];
  for (index_t i = 0; i < g.cell_count(); ++i) {
    const auto c = g.coords(i);
    int len = std::snprintf(buf, sizeof(buf), "%.17g,%.17g", s.time, g.center(0, c[0]));
    csv.append(buf, static_cast<size_t>(len));
    for (int a = 1; a < g.dim; ++a) {
      len = std::snprintf(buf, sizeof(buf), ",%.17g", g.center(a, c[a]));
      csv.append(buf, static_cast<size_t>(len));
    }
    len = std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g\n",
                        s.c_plus[static_cast<size_t>(i)], s.c_minus[static_cast<size_t>(i)],
                        s.phi[static_cast<size_t>(i)]);
    csv.append(buf, static_cast<size_t>(len));
  }
}

std::string corrector_csv(const StructuredGrid& g, const CorrectorField& xi) {
  std::string csv = g.dim == 3 ? "i,j,k,xi_value\n" : "i,j,xi_value\n";
  char buf[128];
  for (index_t idx = 0; idx < g.cell_count(); ++idx) {
    const auto c = g.coords(idx);
    int len;
    if (g.dim == 3)
      len = std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g\n", c[0], c[1], c[2],
                          xi.values[static_cast<size_t>(idx)]);
    else
      len = std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", c[0], c[1],
                          xi.values[static_cast<size_t>(idx)]);
    csv.append(buf, static_cast<size_t>(len));
  }
  return csv;
}

} // namespace pnph
