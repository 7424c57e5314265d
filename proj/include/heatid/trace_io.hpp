#pragma once

// On-disk trace format: `<base>.csv` with header `time_s,temp_c` plus a
// sidecar `<base>.json` carrying
// {material, t_sens0_c, t_obj0_c, sample_rate_hz, seed, normalized}.
// `material` is a name string when known, otherwise the numeric effusivity
// the trace was synthesized at. Normalized traces additionally record
// noise_scale.

#include <filesystem>
#include <vector>

#include "heatid/thermal.hpp"

namespace heatid {

// base must not carry an extension; writes base.csv and base.json.
void write_trace(const std::filesystem::path& base, const TemperatureTrace& trace);

// Accepts the base path or either of the two concrete files.
TemperatureTrace read_trace(const std::filesystem::path& path);

// All traces under dir (non-recursive), located by their .json sidecars,
// sorted by filename for deterministic ordering.
std::vector<TemperatureTrace> read_trace_dir(const std::filesystem::path& dir);

}  // namespace heatid
