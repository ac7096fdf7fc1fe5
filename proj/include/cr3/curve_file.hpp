#pragma once

#include <string>

#include <json.hpp>

#include "cr3/sampling.hpp"

namespace cr3 {

inline constexpr const char* kCurveFormat = "cr3-curve/1";

/// A sampled curve with free-form metadata, stored as JSON.
struct CurveFile {
  SampledCurve curve;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const CurveFile& file);
/// Throws Format on schema violations.
CurveFile curve_from_json(const nlohmann::ordered_json& j);

std::string write_curve(const CurveFile& file);
CurveFile read_curve(const std::string& text);

/// Throws Io.
void save_curve(const CurveFile& file, const std::string& path);
CurveFile load_curve(const std::string& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Writes text to path, or to stdout when path is "-". Throws Io.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace cr3
