#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcelab/gce.h"

namespace gcelab::io {

using json = nlohmann::json;

/// Complex numbers are [re, im] pairs in JSON.
json to_json(cx z);
cx complex_from_json(const json& j);

json to_json(const HoloFn& f);
HoloFn holo_from_json(const json& j);

/// {"kind":"blaschke","zeros":[[re,im],...],"rotation":θ}
json to_json(const BlaschkeProduct& b);
BlaschkeProduct blaschke_from_json(const json& j);

json to_json(const GridSpec& g);
GridSpec grid_from_json(const json& j);

/// "a+bi", "a-bi", "a", "bi"; InvalidInput otherwise.
cx parse_complex(const std::string& s);
/// Comma-separated list of complex literals; empty string gives an empty list.
std::vector<cx> parse_complex_list(const std::string& s);
/// "NRxNT", e.g. "64x128".
std::pair<int, int> parse_grid(const std::string& s);

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double v);

/// Header r,theta,x,y,value; rows ring by ring, angle fastest.
std::string field_csv(const ScalarField& u);
std::string field_csv(const DiskGrid& g, const std::vector<double>& values);

/// Problem JSON: {"H", "h": {"kind":"constant","value"} | {"kind":"samples","values"},
/// "grid", "tol", "max_iter"}. Missing grid falls back to `fallback`.
struct ProblemFile {
  GridSpec grid;
  json H;
  json h;
  double tol = 1e-10;
  int max_iter = 100;
};
ProblemFile problem_from_json(const json& j, const GridSpec& fallback = {});
GceProblem make_problem(const ProblemFile& p, const GridPtr& grid);

json read_json(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gcelab::io
