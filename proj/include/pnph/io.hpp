#ifndef PNPH_IO_HPP
#define PNPH_IO_HPP

#include <string>

#include <json.hpp>

#include "pnph/correctors.hpp"
#include "pnph/linalg.hpp"
#include "pnph/macro.hpp"
#include "pnph/tensors.hpp"

namespace pnph {

using json = nlohmann::json;

json mat_to_json(const Mat& m);  // row-major nested arrays
json tensor_report(const EffectiveTensors& t);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const json& j);

/// series.csv rows (t, node coords, c_plus, c_minus, phi), appended per call.
std::string series_csv_header(int dim);
void append_series_rows(std::string& csv, const MacroState& s);

std::string corrector_csv(const StructuredGrid& g, const CorrectorField& xi);

} // namespace pnph

#endif
