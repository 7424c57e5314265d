#include "heatid/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "heatid/errors.hpp"
#include "heatid/version.hpp"

namespace heatid {

namespace {

using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunManifest make_manifest(const std::string& command, json parameters, std::uint64_t seed,
                          std::vector<std::string> argv) {
  RunManifest m;
  m.command = command;
  m.parameters = std::move(parameters);
  m.seed = seed;
  m.tool_version = kVersion;
  m.timestamp = utc_now();
  m.argv = std::move(argv);
  return m;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  json j;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  j["timestamp"] = manifest.timestamp;
  j["argv"] = manifest.argv;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 1, 1);
  }
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 1, 1);
  }
  return m;
}

}  // namespace heatid
