#include "cr3/curve_file.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cr3/error.hpp"

namespace cr3 {

using json = nlohmann::ordered_json;

json to_json(const CurveFile& file) {
  const SampledCurve& c = file.curve;
  json j;
  j["format"] = kCurveFormat;
  j["model"] = c.model() == CurveModel::Heisenberg ? "heisenberg" : "lift";
  j["periodic"] = c.periodic();
  j["period"] = c.period();
  if (c.model() == CurveModel::Lift && c.monodromy() != Complex(1.0))
    j["monodromy"] = {c.monodromy().real(), c.monodromy().imag()};
  json samples = json::array();
  for (std::size_t k = 0; k < c.size(); ++k) {
    json s;
    s["s"] = c.params()[k];
    if (c.model() == CurveModel::Heisenberg) {
      const HeisenbergPoint& p = c.points()[k];
      s["x"] = p.x;
      s["y"] = p.y;
      s["z"] = p.z;
    } else {
      const PseudoVector& v = c.lifts()[k];
      s["z1"] = {v(0).real(), v(0).imag()};
      s["z2"] = {v(1).real(), v(1).imag()};
      s["z3"] = {v(2).real(), v(2).imag()};
    }
    samples.push_back(std::move(s));
  }
  j["samples"] = std::move(samples);
  j["meta"] = file.meta;
  return j;
}

namespace {

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::Format, std::string("curve file lacks '") + key + "'");
  return *it;
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) fail(ErrorCode::Format, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

Complex complex_pair(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(ErrorCode::Format, std::string("'") + key + "' must be [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

CurveFile curve_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::Format, "curve file must be a JSON object");
  const json& fmt = field(j, "format");
  if (!fmt.is_string() || fmt.get<std::string>() != kCurveFormat)
    fail(ErrorCode::Format, std::string("unsupported format tag (expected ") + kCurveFormat + ")");
  const json& model = field(j, "model");
  const json& periodic = field(j, "periodic");
  if (!periodic.is_boolean()) fail(ErrorCode::Format, "'periodic' must be a boolean");
  const double period = number(j, "period");
  const json& samples = field(j, "samples");
  if (!samples.is_array()) fail(ErrorCode::Format, "'samples' must be an array");

  std::vector<double> s;
  s.reserve(samples.size());
  CurveFile out;
  if (model == "heisenberg") {
    std::vector<HeisenbergPoint> p;
    for (const json& r : samples) {
      s.push_back(number(r, "s"));
      p.push_back({number(r, "x"), number(r, "y"), number(r, "z")});
    }
    out.curve = SampledCurve::heisenberg(std::move(s), std::move(p), periodic.get<bool>(), period);
  } else if (model == "lift") {
    std::vector<PseudoVector> g;
    for (const json& r : samples) {
      s.push_back(number(r, "s"));
      PseudoVector v;
      v << complex_pair(r, "z1"), complex_pair(r, "z2"), complex_pair(r, "z3");
      g.push_back(v);
    }
    Complex m = j.contains("monodromy") ? complex_pair(j, "monodromy") : Complex(1.0);
    out.curve = SampledCurve::lift(std::move(s), std::move(g), periodic.get<bool>(), period, m);
  } else {
    fail(ErrorCode::Format, "'model' must be \"heisenberg\" or \"lift\"");
  }
  if (j.contains("meta")) out.meta = j["meta"];
  return out;
}

std::string write_curve(const CurveFile& file) { return to_json(file).dump(2) + "\n"; }

CurveFile read_curve(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("invalid JSON: ") + e.what());
  }
  return curve_from_json(j);
}

void save_curve(const CurveFile& file, const std::string& path) { write_text(path, write_curve(file)); }

CurveFile load_curve(const std::string& path) { return read_curve(read_text(path)); }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path + " for writing");
  f << text;
  if (!f) fail(ErrorCode::Io, "write to " + path + " failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace cr3
