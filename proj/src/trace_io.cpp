#include "heatid/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "heatid/errors.hpp"

namespace heatid {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::filesystem::path strip_known_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv" || ext == ".json") {
    auto base = path;
    base.replace_extension();
    return base;
  }
  return path;
}

}  // namespace

void write_trace(const std::filesystem::path& base, const TemperatureTrace& trace) {
  trace.validate();
  auto csv_path = base;
  csv_path += ".csv";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot write trace: " + csv_path.string());
  csv << "time_s,temp_c\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    csv << fmt(trace.times[i]) << ',' << fmt(trace.temps[i]) << '\n';
  if (!csv) throw IoError("write failed: " + csv_path.string());

  json meta;
  if (!trace.meta.material_name.empty())
    meta["material"] = trace.meta.material_name;
  else
    meta["material"] = trace.meta.effusivity;
  meta["t_sens0_c"] = trace.meta.t_sens0;
  meta["t_obj0_c"] = trace.meta.t_obj0;
  meta["sample_rate_hz"] = trace.meta.sample_rate;
  meta["seed"] = trace.meta.seed;
  meta["normalized"] = trace.meta.normalized;
  if (trace.meta.normalized) meta["noise_scale"] = trace.meta.noise_scale;

  auto json_path = base;
  json_path += ".json";
  std::ofstream side(json_path);
  if (!side) throw IoError("cannot write trace metadata: " + json_path.string());
  side << meta.dump(2) << '\n';
  if (!side) throw IoError("write failed: " + json_path.string());
}

TemperatureTrace read_trace(const std::filesystem::path& path) {
  const auto base = strip_known_extension(path);
  auto csv_path = base;
  csv_path += ".csv";
  auto json_path = base;
  json_path += ".json";

  std::ifstream side(json_path);
  if (!side) throw IoError("cannot open trace metadata: " + json_path.string());
  json meta;
  try {
    side >> meta;
  } catch (const json::exception& e) {
    throw ParseError(std::string("trace metadata: ") + e.what(), 1, 1);
  }

  TemperatureTrace trace;
  try {
    const auto& material = meta.at("material");
    if (material.is_string())
      trace.meta.material_name = material.get<std::string>();
    else
      trace.meta.effusivity = material.get<double>();
    trace.meta.t_sens0 = meta.at("t_sens0_c").get<double>();
    trace.meta.t_obj0 = meta.at("t_obj0_c").get<double>();
    trace.meta.sample_rate = meta.at("sample_rate_hz").get<double>();
    trace.meta.seed = meta.at("seed").get<std::uint64_t>();
    trace.meta.normalized = meta.at("normalized").get<bool>();
    if (trace.meta.normalized) trace.meta.noise_scale = meta.value("noise_scale", 0.0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("trace metadata: ") + e.what(), 1, 1);
  }

  std::ifstream csv(csv_path);
  if (!csv) throw IoError("cannot open trace: " + csv_path.string());
  std::string line;
  long line_no = 0;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line.rfind("time_s,temp_c", 0) != 0)
        throw ParseError("expected trace header 'time_s,temp_c'", 1, 1);
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected two comma-separated values", line_no, 1);
    char* end = nullptr;
    const std::string t_text = line.substr(0, comma);
    const double t = std::strtod(t_text.c_str(), &end);
    if (end != t_text.c_str() + t_text.size()) throw ParseError("malformed time", line_no, 1);
    const std::string v_text = line.substr(comma + 1);
    const double v = std::strtod(v_text.c_str(), &end);
    if (end != v_text.c_str() + v_text.size())
      throw ParseError("malformed temperature", line_no, static_cast<long>(comma) + 2);
    trace.times.push_back(t);
    trace.temps.push_back(v);
  }
  trace.validate();
  return trace;
}

std::vector<TemperatureTrace> read_trace_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> bases;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    auto base = entry.path();
    base.replace_extension();
    auto csv = base;
    csv += ".csv";
    if (std::filesystem::exists(csv)) bases.push_back(base);
  }
  std::sort(bases.begin(), bases.end());
  std::vector<TemperatureTrace> traces;
  traces.reserve(bases.size());
  for (const auto& base : bases) traces.push_back(read_trace(base));
  return traces;
}

}  // namespace heatid
