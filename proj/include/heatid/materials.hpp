#pragma once

// Material database: CSV ingestion and validation, the built-in 12-material
// table, and uniform per-interval trial sampling for empirical sweeps.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heatid/grid.hpp"

namespace heatid {

enum class MaterialCategory {
  metals_alloys,
  ceramics_glasses,
  polymers_elastomers,
  composites_foams_natural,
};

const char* to_string(MaterialCategory category);
// Case-insensitive; throws DomainError on an unknown name.
MaterialCategory category_from_string(const std::string& name);

struct MaterialRecord {
  std::string name;
  MaterialCategory category = MaterialCategory::metals_alloys;
  double e_min = 0.0;
  double e_max = 0.0;
  std::optional<double> e_identified;

  // Identified value when present, else the range midpoint.
  double representative_effusivity() const {
    return e_identified ? *e_identified : 0.5 * (e_min + e_max);
  }

  void validate() const;
};

struct MaterialDatabase {
  std::vector<MaterialRecord> records;
  // Non-fatal data oddities found at load time (e.g. an identified value
  // outside its own printed range); stored verbatim, never "fixed".
  std::vector<std::string> warnings;

  void validate() const;
  const MaterialRecord& find(const std::string& name) const;
};

// CSV schema: header `name,category,e_min,e_max,e_identified`; the last
// column may be empty. Categories match case-insensitively.
MaterialDatabase load_database(const std::filesystem::path& path);
void save_database(const std::filesystem::path& path, const MaterialDatabase& db);

// The published 12-material table (3 per category), digit-for-digit,
// including the MDF row whose identified value sits below its own minimum
// (kept as printed; flagged in warnings).
MaterialDatabase builtin_table();

struct TrialSample {
  int interval = 0;
  double effusivity = 0.0;
};

// trials_per_interval effusivities drawn uniformly from each grid interval
// (lower exclusive, upper inclusive), deterministic under seed. One stream,
// intervals in ascending order, trials in order within each interval.
std::vector<TrialSample> sample_trials(const EffusivityGrid& grid, int trials_per_interval,
                                       std::uint64_t seed);

}  // namespace heatid
