#pragma once

// Run provenance: every file-producing command drops a manifest.json beside
// its outputs with the full parameter set, seed, tool version, timestamp, and
// the argv needed to replay the run bit-identically.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace heatid {

struct RunManifest {
  std::string command;
  nlohmann::json parameters;  // every flag, defaults included
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string timestamp;  // ISO 8601 UTC, e.g. 2026-08-16T12:00:00Z
  std::vector<std::string> argv;
};

RunManifest make_manifest(const std::string& command, nlohmann::json parameters,
                          std::uint64_t seed, std::vector<std::string> argv);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace heatid
