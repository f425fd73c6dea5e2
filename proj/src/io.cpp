#include "gcelab/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gcelab/errors.h"

namespace gcelab::io {

namespace {

std::vector<cx> complex_list(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of [re, im] pairs");
  std::vector<cx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

json complex_array(const std::vector<cx>& v) {
  json a = json::array();
  for (cx z : v) a.push_back(to_json(z));
  return a;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidInput(std::string("expected a number for ") + what);
  return j.get<double>();
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

double parse_real(std::string_view s) {
  double v = 0;
  const auto* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || first == s.data() + s.size())
    throw InvalidInput("malformed real '" + std::string(s) + "'");
  return v;
}

}  // namespace

json to_json(cx z) { return json::array({z.real(), z.imag()}); }

cx complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_array() || j.size() != 2) throw InvalidInput("complex numbers are [re, im] pairs");
  return {number(j[0], "re"), number(j[1], "im")};
}

json to_json(const HoloFn& f) {
  json j;
  j["kind"] = kind_name(f.kind());
  switch (f.kind()) {
    case HoloFn::Kind::poly:
      j["coeffs"] = complex_array(f.poly().c);
      break;
    case HoloFn::Kind::rational:
      j["num"] = complex_array(f.numerator().c);
      j["den"] = complex_array(f.denominator().c);
      break;
    case HoloFn::Kind::blaschke:
    case HoloFn::Kind::blaschke_derivative:
      j["zeros"] = complex_array(f.blaschke_spec().zeros);
      j["rotation"] = f.blaschke_spec().rotation;
      break;
    case HoloFn::Kind::outer:
      j["modulus"] = f.outer_modulus();
      break;
    case HoloFn::Kind::product: {
      json fs = json::array();
      for (const auto& g : f.factors()) fs.push_back(to_json(g));
      j["factors"] = fs;
      j["scale"] = to_json(f.scale());
      break;
    }
  }
  return j;
}

HoloFn holo_from_json(const json& j) {
  const json& kj = field(j, "kind");
  if (!kj.is_string()) throw InvalidInput("HoloFn kind must be a string");
  const auto kind = kj.get<std::string>();
  if (kind == "poly") return HoloFn::polynomial(complex_list(field(j, "coeffs")));
  if (kind == "rational") return HoloFn::rational(complex_list(field(j, "num")), complex_list(field(j, "den")));
  if (kind == "blaschke") return HoloFn::blaschke(blaschke_from_json(j));
  if (kind == "blaschke_derivative") return HoloFn::blaschke_derivative(blaschke_from_json(j));
  if (kind == "outer") {
    const json& m = field(j, "modulus");
    if (!m.is_array()) throw InvalidInput("outer modulus must be an array");
    std::vector<double> mod;
    for (const auto& v : m) mod.push_back(number(v, "modulus"));
    return HoloFn::outer(std::move(mod));
  }
  if (kind == "product") {
    const json& fs = field(j, "factors");
    if (!fs.is_array()) throw InvalidInput("product factors must be an array");
    std::vector<HoloFn> factors;
    for (const auto& f : fs) factors.push_back(holo_from_json(f));
    return HoloFn::product(std::move(factors), j.contains("scale") ? complex_from_json(j["scale"]) : cx(1.0));
  }
  throw InvalidInput("unknown HoloFn kind '" + kind + "'");
}

json to_json(const BlaschkeProduct& b) {
  return {{"kind", "blaschke"}, {"zeros", complex_array(b.zeros)}, {"rotation", b.rotation}};
}

BlaschkeProduct blaschke_from_json(const json& j) {
  const double rot = j.contains("rotation") ? number(j["rotation"], "rotation") : 0.0;
  return BlaschkeProduct(complex_list(field(j, "zeros")), rot);
}

json to_json(const GridSpec& g) {
  return {{"n_r", g.n_r}, {"n_theta", g.n_theta}, {"refinement", g.refinement}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec g;
  if (!j.is_object()) throw InvalidInput("grid must be an object");
  if (j.contains("n_r")) g.n_r = static_cast<int>(number(j["n_r"], "n_r"));
  if (j.contains("n_theta")) g.n_theta = static_cast<int>(number(j["n_theta"], "n_theta"));
  if (j.contains("refinement")) g.refinement = number(j["refinement"], "refinement");
  return g;
}

cx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InvalidInput("empty complex literal");
  if (s.back() != 'i') return parse_real(s);
  s.pop_back();
  // Split at the last sign that is not part of an exponent or the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag_part = [](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {parse_real(std::string_view(s).substr(0, split)), imag_part(std::string_view(s).substr(split))};
}

std::vector<cx> parse_complex_list(const std::string& s) {
  std::vector<cx> out;
  if (s.find_first_not_of(" \t") == std::string::npos) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  return out;
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw InvalidInput("grid must look like NRxNT");
  const double nr = parse_real(std::string_view(s).substr(0, x));
  const double nt = parse_real(std::string_view(s).substr(x + 1));
  if (nr != std::floor(nr) || nt != std::floor(nt)) throw InvalidInput("grid sizes must be integers");
  return {static_cast<int>(nr), static_cast<int>(nt)};
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string field_csv(const DiskGrid& g, const std::vector<double>& values) {
  if (values.size() != g.size()) throw InvalidInput("field_csv: size mismatch");
  std::string out = "r,theta,x,y,value\n";
  out.reserve(g.size() * 100);
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) {
      const cx z = g.node(i, j);
      for (double v : {g.radii()[i], g.angles()[j], z.real(), z.imag()}) {
        out += format_double(v);
        out += ',';
      }
      out += format_double(values[g.index(i, j)]);
      out += '\n';
    }
  return out;
}

std::string field_csv(const ScalarField& u) { return field_csv(*u.grid(), u.values()); }

ProblemFile problem_from_json(const json& j, const GridSpec& fallback) {
  ProblemFile p;
  p.grid = j.contains("grid") ? grid_from_json(j["grid"]) : fallback;
  p.H = field(j, "H");
  p.h = field(j, "h");
  if (j.contains("tol")) p.tol = number(j["tol"], "tol");
  if (j.contains("max_iter")) p.max_iter = static_cast<int>(number(j["max_iter"], "max_iter"));
  if (!(p.tol > 0)) throw InvalidInput("tol must be positive");
  if (p.max_iter < 1) throw InvalidInput("max_iter must be positive");
  return p;
}

GceProblem make_problem(const ProblemFile& p, const GridPtr& grid) {
  const HoloFn H = holo_from_json(p.H);
  const auto kind = field(p.h, "kind");
  if (kind == "constant") return GceProblem::constant(H, number(field(p.h, "value"), "h value"), grid);
  if (kind == "samples") {
    const json& vs = field(p.h, "values");
    if (!vs.is_array()) throw InvalidInput("h samples must be an array");
    std::vector<double> h;
    for (const auto& v : vs) h.push_back(number(v, "h sample"));
    return GceProblem(H, std::move(h), grid);
  }
  throw InvalidInput("h kind must be 'constant' or 'samples'");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidInput("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace gcelab::io
