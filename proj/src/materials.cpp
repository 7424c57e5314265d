#include "heatid/materials.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "heatid/errors.hpp"

namespace heatid {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct Field {
  std::string text;
  long column;  // 1-based position within the line
};

std::vector<Field> split_fields(const std::string& line) {
  std::vector<Field> fields;
  std::string current;
  long start = 1;
  long pos = 1;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back({trim(current), start});
      current.clear();
      start = pos + 1;
    } else {
      current.push_back(ch);
    }
    ++pos;
  }
  fields.push_back({trim(current), start});
  return fields;
}

double parse_double(const Field& field, long line_no) {
  if (field.text.empty()) throw ParseError("empty numeric field", line_no, field.column);
  char* end = nullptr;
  const double v = std::strtod(field.text.c_str(), &end);
  if (end != field.text.c_str() + field.text.size() || !std::isfinite(v))
    throw ParseError("malformed number '" + field.text + "'", line_no, field.column);
  return v;
}

std::string format_effusivity(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void append_range_warning(MaterialDatabase& db, const MaterialRecord& rec) {
  if (rec.e_identified && (*rec.e_identified < rec.e_min || *rec.e_identified > rec.e_max)) {
    db.warnings.push_back(rec.name + ": identified effusivity " +
                          format_effusivity(*rec.e_identified) + " lies outside its range [" +
                          format_effusivity(rec.e_min) + ", " + format_effusivity(rec.e_max) +
                          "]; stored as printed");
  }
}

}  // namespace

const char* to_string(MaterialCategory category) {
  switch (category) {
    case MaterialCategory::metals_alloys: return "metals_alloys";
    case MaterialCategory::ceramics_glasses: return "ceramics_glasses";
    case MaterialCategory::polymers_elastomers: return "polymers_elastomers";
    case MaterialCategory::composites_foams_natural: return "composites_foams_natural";
  }
  throw DomainError("unknown material category value");
}

MaterialCategory category_from_string(const std::string& name) {
  const std::string key = lower(trim(name));
  if (key == "metals_alloys") return MaterialCategory::metals_alloys;
  if (key == "ceramics_glasses") return MaterialCategory::ceramics_glasses;
  if (key == "polymers_elastomers") return MaterialCategory::polymers_elastomers;
  if (key == "composites_foams_natural") return MaterialCategory::composites_foams_natural;
  throw DomainError("unknown material category '" + name + "'");
}

void MaterialRecord::validate() const {
  if (name.empty()) throw ValidationError("material record", "name is empty");
  if (!(e_min > 0.0)) throw ValidationError(name, "e_min must be positive");
  if (!(e_min <= e_max)) throw ValidationError(name, "e_min exceeds e_max");
}

void MaterialDatabase::validate() const {
  if (records.empty()) throw ValidationError("database", "no material records");
  std::set<std::string> seen;
  for (const auto& rec : records) {
    rec.validate();
    if (!seen.insert(rec.name).second) throw ValidationError(rec.name, "duplicate material name");
  }
}

const MaterialRecord& MaterialDatabase::find(const std::string& name) const {
  for (const auto& rec : records)
    if (rec.name == name) return rec;
  throw DomainError("material '" + name + "' not in database");
}

MaterialDatabase load_database(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open material database: " + path.string());

  MaterialDatabase db;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() < 4 || lower(fields[0].text) != "name" ||
          lower(fields[1].text) != "category")
        throw ParseError("expected header 'name,category,e_min,e_max,e_identified'", line_no,
                         fields[0].column);
      header_seen = true;
      continue;
    }
    if (fields.size() != 4 && fields.size() != 5)
      throw ParseError("expected 4 or 5 fields, got " + std::to_string(fields.size()), line_no, 1);

    MaterialRecord rec;
    rec.name = fields[0].text;
    if (rec.name.empty()) throw ParseError("empty material name", line_no, fields[0].column);
    try {
      rec.category = category_from_string(fields[1].text);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_no, fields[1].column);
    }
    rec.e_min = parse_double(fields[2], line_no);
    rec.e_max = parse_double(fields[3], line_no);
    if (fields.size() == 5 && !fields[4].text.empty())
      rec.e_identified = parse_double(fields[4], line_no);

    try {
      rec.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(rec.name, std::string(e.what()) + " (row " +
                            std::to_string(line_no) + ")");
    }
    append_range_warning(db, rec);
    db.records.push_back(std::move(rec));
  }
  db.validate();
  return db;
}

void save_database(const std::filesystem::path& path, const MaterialDatabase& db) {
  db.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write material database: " + path.string());
  out << "name,category,e_min,e_max,e_identified\n";
  for (const auto& rec : db.records) {
    out << rec.name << ',' << to_string(rec.category) << ',' << format_effusivity(rec.e_min)
        << ',' << format_effusivity(rec.e_max) << ',';
    if (rec.e_identified) out << format_effusivity(*rec.e_identified);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

MaterialDatabase builtin_table() {
  using C = MaterialCategory;
  MaterialDatabase db;
  auto add = [&db](const char* name, C cat, double identified, double lo, double hi) {
    MaterialRecord rec;
    rec.name = name;
    rec.category = cat;
    rec.e_min = lo;
    rec.e_max = hi;
    rec.e_identified = identified;
    append_range_warning(db, rec);
    db.records.push_back(std::move(rec));
  };
  // Published values, kept digit-for-digit (columns: identified, min, max).
  add("Cardboard", C::composites_foams_natural, 336.90, 196.67, 452.23);
  add("Wood", C::composites_foams_natural, 400.95, 331.00, 506.46);
  add("ABS", C::polymers_elastomers, 514.15, 514.15, 882.58);
  add("Rubber", C::polymers_elastomers, 570.81, 407.00, 570.81);
  add("MDF", C::composites_foams_natural, 544.63, 618.47, 733.93);
  add("Acrylic", C::polymers_elastomers, 635.49, 380.35, 702.15);
  add("Porcelain", C::ceramics_glasses, 1276.59, 1162.69, 1334.07);
  add("Glass", C::ceramics_glasses, 1433.31, 1433.31, 1560.39);
  add("Granite", C::ceramics_glasses, 2749.87, 2252.32, 2749.87);
  add("Stainless Steel", C::metals_alloys, 10184.17, 6388.35, 10184.17);
  add("Aluminum", C::metals_alloys, 17530.03, 12767.69, 25972.02);
  add("Copper", C::metals_alloys, 23049.18, 23049.18, 36761.16);
  db.validate();
  return db;
}

std::vector<TrialSample> sample_trials(const EffusivityGrid& grid, int trials_per_interval,
                                       std::uint64_t seed) {
  grid.validate();
  if (trials_per_interval < 1) throw DomainError("trials_per_interval must be >= 1");
  std::mt19937_64 gen(seed);
  std::vector<TrialSample> samples;
  samples.reserve(static_cast<std::size_t>(grid.n_intervals) * trials_per_interval);
  for (int i = 0; i < grid.n_intervals; ++i) {
    const double width = grid.width();
    const double upper = grid.upper(i);
    for (int k = 0; k < trials_per_interval; ++k) {
      // u in [0, 1) mapped to (lower, upper] to honor the exclusive lower edge.
      const double u = static_cast<double>(gen() >> 11) * 0x1p-53;
      samples.push_back({i, upper - u * width});
    }
  }
  return samples;
}

}  // namespace heatid
