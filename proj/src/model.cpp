#include "heatid/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "heatid/errors.hpp"

namespace heatid {

namespace {

using nlohmann::json;

constexpr double kQuadRelTol = 1e-8;
constexpr int kQuadMaxDepth = 60;

struct QuadState {
  double excess = 0.0;  // error beyond budget from depth-capped panels
};

double erfc_sq(double coeff, double t) {
  if (t <= 0.0) return 0.0;  // removable: erfc argument -> infinity
  const double v = std::erfc(coeff / std::sqrt(t));
  return v * v;
}

double simpson_panel(double coeff, double a, double b, double fa, double fm, double fb,
                     double whole, double eps, int depth, QuadState& state) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = erfc_sq(coeff, lm);
  const double frm = erfc_sq(coeff, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (depth <= 0) {
    state.excess += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_panel(coeff, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, state) +
         simpson_panel(coeff, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, state);
}

// integral_0^tc erfc^2(depth / (2 sqrt(alpha t))) dt
double erfc_sq_integral(const SensorParams& sensor, double t_contact) {
  const double coeff = sensor.thermistor_depth / (2.0 * std::sqrt(sensor.alpha_sens));
  const double fa = 0.0;
  const double fm = erfc_sq(coeff, 0.5 * t_contact);
  const double fb = erfc_sq(coeff, t_contact);
  const double whole = t_contact / 6.0 * (fa + 4.0 * fm + fb);
  const double scale = std::max(std::fabs(whole), 1e-300);
  QuadState state;
  const double result =
      simpson_panel(coeff, 0.0, t_contact, fa, fm, fb, whole, kQuadRelTol * scale,
                    kQuadMaxDepth, state);
  if (state.excess > 0.0) {
    const double achieved = (kQuadRelTol * scale + state.excess) / std::max(result, 1e-300);
    if (achieved > kQuadRelTol)
      throw QuadratureError("erfc^2 quadrature missed its error budget", achieved);
  }
  return result;
}

long samples_per_trace(const SensorParams& sensor, const ContactConditions& cond) {
  const auto n = static_cast<long>(std::floor(cond.t_contact * sensor.sample_rate));
  if (n < 1) throw DomainError("contact window shorter than one sample period");
  return n;
}

double lambda_from_gap(double surf_gap, double q_integral, double sigma, double dt) {
  return surf_gap * surf_gap / (sigma * sigma * dt) * q_integral;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
}

void check_phi(double phi) {
  if (!(phi > 0.5) || !(phi < 1.0)) throw DomainError("phi must lie in (0.5, 1)");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

const char* category_color(MaterialCategory category) {
  switch (category) {
    case MaterialCategory::metals_alloys: return "#8da0cb";
    case MaterialCategory::ceramics_glasses: return "#fc8d62";
    case MaterialCategory::polymers_elastomers: return "#66c2a5";
    case MaterialCategory::composites_foams_natural: return "#e78ac3";
  }
  return "#cccccc";
}

// Linear rescale of v from [lo, hi] onto [out_lo, out_hi]; zero input spread
// lands on the midpoint.
double rescale(double v, double lo, double hi, double out_lo, double out_hi) {
  if (!(hi > lo)) return 0.5 * (out_lo + out_hi);
  return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
}

std::vector<int> covered_midpoints(const EffusivityGrid& grid, const MaterialRecord& mat) {
  if (mat.e_max <= grid.e_min || mat.e_min > grid.e_max)
    throw RangeError("material '" + mat.name + "' range [" + fmt4(mat.e_min) + ", " +
                     fmt4(mat.e_max) + "] lies outside the grid");
  std::vector<int> idx;
  for (int i = 0; i < grid.n_intervals; ++i) {
    const double mid = grid.midpoint(i);
    if (mid >= mat.e_min && mid <= mat.e_max) idx.push_back(i);
  }
  if (idx.empty()) {
    // Sub-resolution range: snap to the midpoint nearest the range center.
    const double center = 0.5 * (mat.e_min + mat.e_max);
    int best = 0;
    double best_dist = std::fabs(grid.midpoint(0) - center);
    for (int i = 1; i < grid.n_intervals; ++i) {
      const double dist = std::fabs(grid.midpoint(i) - center);
      if (dist < best_dist) {
        best = i;
        best_dist = dist;
      }
    }
    idx.push_back(best);
  }
  return idx;
}

}  // namespace

double noncentrality_lambda(const SensorParams& sensor, double e1, double e2,
                            const ContactConditions& cond, double sigma) {
  check_sigma(sigma);
  const double surf1 = surface_temperature(sensor, {e1}, cond);
  const double surf2 = surface_temperature(sensor, {e2}, cond);
  if (e1 == e2) return 0.0;
  const double q = erfc_sq_integral(sensor, cond.t_contact);
  return lambda_from_gap(surf1 - surf2, q, sigma, 1.0 / sensor.sample_rate);
}

double f1_pair(const SensorParams& sensor, double e1, double e2, const ContactConditions& cond,
               double sigma, SeriesTolerance tol) {
  const long n = samples_per_trace(sensor, cond);
  const double lambda = noncentrality_lambda(sensor, e1, e2, cond, sigma);
  return 1.0 - noncentral_f_cdf(1.0, static_cast<double>(n), static_cast<double>(n), lambda, tol);
}

DeltaResult min_distinguishable_difference(const SensorParams& sensor, double e,
                                           const ContactConditions& cond, double sigma,
                                           double phi, double delta0) {
  check_sigma(sigma);
  check_phi(phi);
  if (!(e > 0.0) || e > kMaxPhysicalEffusivity)
    throw DomainError("e must lie in the physical range (0, 4e4]");
  if (!(delta0 > 0.0)) throw DomainError("delta0 must be positive");

  const long n = samples_per_trace(sensor, cond);
  const double q = erfc_sq_integral(sensor, cond.t_contact);
  const double dt = 1.0 / sensor.sample_rate;
  const double surf_e = surface_temperature(sensor, {e}, cond);
  const auto f1_at = [&](double other) {
    const double gap = surf_e - surface_temperature(sensor, {other}, cond);
    const double lambda = lambda_from_gap(gap, q, sigma, dt);
    return 1.0 - noncentral_f_cdf(1.0, static_cast<double>(n), static_cast<double>(n), lambda);
  };

  constexpr double kMinCandidate = 1e-6;  // effusivity floor, physically "nothing there"
  // Within one direction F1 grows with delta (the surface-temperature gap
  // widens), so each direction has its own threshold, found independently;
  // mixing them into one search would break the monotonicity bisection needs.
  const auto direction_threshold = [&](double sign, double delta_cap) -> double {
    if (!(delta_cap > 0.0) || f1_at(e + sign * delta_cap) < phi)
      return std::numeric_limits<double>::infinity();
    double hi = std::min(delta0, delta_cap);
    double lo = 0.0;
    while (f1_at(e + sign * hi) < phi) {
      lo = hi;
      hi = std::min(2.0 * hi, delta_cap);
    }
    while (hi - lo > 1e-4 * hi) {
      const double mid = 0.5 * (lo + hi);
      if (f1_at(e + sign * mid) >= phi)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };

  const double up = direction_threshold(1.0, kMaxPhysicalEffusivity - e);
  const double down = direction_threshold(-1.0, e - kMinCandidate);
  const double delta = std::min(up, down);
  if (!std::isfinite(delta)) return {0.0, true};
  return {delta, false};
}

F1Matrix f1_matrix(const SensorParams& sensor, const EffusivityGrid& grid,
                   const ContactConditions& cond, double sigma, int threads) {
  grid.validate();
  sensor.validate();
  cond.validate();
  check_sigma(sigma);
  const long n_samples = samples_per_trace(sensor, cond);
  const int n = grid.n_intervals;

  std::vector<double> surf(n);
  for (int i = 0; i < n; ++i) surf[i] = surface_temperature(sensor, {grid.midpoint(i)}, cond);
  const double q = erfc_sq_integral(sensor, cond.t_contact);
  const double dt = 1.0 / sensor.sample_rate;

  F1Matrix m;
  m.grid = grid;
  m.sensor = sensor;
  m.cond = cond;
  m.sigma = sigma;
  m.source = "model";
  m.scores.assign(static_cast<std::size_t>(n) * n, 0.5);

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  unsigned requested = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  requested = std::min<unsigned>(requested, pairs.empty() ? 1u : static_cast<unsigned>(pairs.size()));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t k = begin; k < end; ++k) {
        const auto [i, j] = pairs[k];
        const double lambda = lambda_from_gap(surf[i] - surf[j], q, sigma, dt);
        const double score = 1.0 - noncentral_f_cdf(1.0, static_cast<double>(n_samples),
                                                    static_cast<double>(n_samples), lambda);
        m.at(i, j) = score;
        m.at(j, i) = score;
      }
    } catch (...) {
      std::scoped_lock lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (requested <= 1) {
    run_chunk(0, pairs.size());
  } else {
    std::vector<std::thread> pool;
    pool.reserve(requested);
    const std::size_t chunk = (pairs.size() + requested - 1) / requested;
    for (unsigned t = 0; t < requested; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(pairs.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_chunk, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return m;
}

BinaryMap binary_map(const F1Matrix& m, double phi) {
  if (!std::isfinite(phi) || phi <= 0.0 || phi >= 1.0)
    throw DomainError("phi must lie in (0, 1)");
  BinaryMap map;
  map.grid = m.grid;
  map.phi = phi;
  map.bits.resize(m.scores.size());
  for (std::size_t k = 0; k < m.scores.size(); ++k)
    map.bits[k] = m.scores[k] >= phi ? 1 : 0;
  return map;
}

double matrix_match(const BinaryMap& a, const BinaryMap& b) {
  const int n = a.n();
  if (n != b.n()) throw DimensionError("binary maps have different grid sizes");
  if (n < 2) throw DomainError("matrix_match needs at least a 2x2 map");
  long diff = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) diff += std::abs(int(a.at(i, j)) - int(b.at(i, j)));
  const double total = 0.5 * static_cast<double>(n) * (n - 1);
  return (1.0 - static_cast<double>(diff) / total) * 100.0;
}

double material_pair_avg_f1(const F1Matrix& m, const MaterialRecord& mat_a,
                            const MaterialRecord& mat_b) {
  mat_a.validate();
  mat_b.validate();
  const auto rows = covered_midpoints(m.grid, mat_a);
  const auto cols = covered_midpoints(m.grid, mat_b);
  double sum = 0.0;
  for (int i : rows)
    for (int j : cols) sum += m.at(i, j);
  return sum / (static_cast<double>(rows.size()) * static_cast<double>(cols.size()));
}

NodeGraph build_node_graph(const MaterialDatabase& db, const F1Matrix& m, double phi) {
  db.validate();
  check_phi(phi);
  NodeGraph graph;
  graph.phi = phi;
  graph.nodes.reserve(db.records.size());
  for (const auto& rec : db.records)
    graph.nodes.push_back({rec, rec.representative_effusivity()});
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    for (std::size_t j = i + 1; j < db.records.size(); ++j) {
      const double avg = material_pair_avg_f1(m, db.records[i], db.records[j]);
      if (avg < phi)
        graph.edges.push_back({static_cast<int>(i), static_cast<int>(j), avg});
    }
  }
  return graph;
}

std::string to_dot(const NodeGraph& graph) {
  double e_lo = 0.0, e_hi = 0.0;
  if (!graph.nodes.empty()) {
    e_lo = e_hi = graph.nodes.front().effusivity;
    for (const auto& node : graph.nodes) {
      e_lo = std::min(e_lo, node.effusivity);
      e_hi = std::max(e_hi, node.effusivity);
    }
  }
  double w_lo = 0.0, w_hi = 0.0;
  if (!graph.edges.empty()) {
    w_lo = w_hi = 1.0 / graph.edges.front().avg_f1;
    for (const auto& edge : graph.edges) {
      const double inv = 1.0 / edge.avg_f1;
      w_lo = std::min(w_lo, inv);
      w_hi = std::max(w_hi, inv);
    }
  }

  std::ostringstream out;
  out << "graph indistinguishability {\n";
  out << "  graph [overlap=false];\n";
  out << "  node [shape=circle, style=filled, fixedsize=true];\n";
  for (const auto& node : graph.nodes) {
    const double width = rescale(node.effusivity, e_lo, e_hi, 0.2, 2.0);
    out << "  \"" << node.material.name << "\" [width=" << fmt4(width) << ", fillcolor=\""
        << category_color(node.material.category) << "\"];\n";
  }
  for (const auto& edge : graph.edges) {
    const double penwidth = rescale(1.0 / edge.avg_f1, w_lo, w_hi, 0.5, 5.0);
    out << "  \"" << graph.nodes[edge.a].material.name << "\" -- \""
        << graph.nodes[edge.b].material.name << "\" [penwidth=" << fmt4(penwidth)
        << ", tooltip=\"avg F1 " << fmt4(edge.avg_f1) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

void write_matrix(const std::filesystem::path& base, const F1Matrix& m) {
  const int n = m.n();
  if (m.scores.size() != static_cast<std::size_t>(n) * n)
    throw DimensionError("matrix score buffer does not match its grid");

  auto csv_path = base;
  csv_path += ".csv";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot write matrix: " + csv_path.string());
  for (int j = 0; j < n; ++j) {
    if (j) csv << ',';
    csv << fmt17(m.grid.midpoint(j));
  }
  csv << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) csv << ',';
      csv << fmt17(m.at(i, j));
    }
    csv << '\n';
  }
  if (!csv) throw IoError("write failed: " + csv_path.string());

  json envelope;
  envelope["grid"] = {{"e_min", m.grid.e_min},
                      {"e_max", m.grid.e_max},
                      {"n_intervals", m.grid.n_intervals}};
  envelope["conditions"] = {{"sensor",
                             {{"e_sens", m.sensor.e_sens},
                              {"alpha_sens", m.sensor.alpha_sens},
                              {"thermistor_depth", m.sensor.thermistor_depth},
                              {"sample_rate", m.sensor.sample_rate},
                              {"noise_sigma", m.sensor.noise_sigma}}},
                            {"contact",
                             {{"t_sens0", m.cond.t_sens0},
                              {"t_obj0", m.cond.t_obj0},
                              {"t_contact", m.cond.t_contact}}},
                            {"sigma", m.sigma}};
  envelope["source"] = m.source;
  auto csv_name = base.filename();
  csv_name += ".csv";
  envelope["csv"] = csv_name.string();

  auto json_path = base;
  json_path += ".json";
  std::ofstream side(json_path);
  if (!side) throw IoError("cannot write matrix envelope: " + json_path.string());
  side << envelope.dump(2) << '\n';
  if (!side) throw IoError("write failed: " + json_path.string());
}

F1Matrix read_matrix(const std::filesystem::path& path) {
  auto base = path;
  const auto ext = base.extension().string();
  if (ext == ".csv" || ext == ".json") base.replace_extension();

  auto json_path = base;
  json_path += ".json";
  std::ifstream side(json_path);
  if (!side) throw IoError("cannot open matrix envelope: " + json_path.string());
  json envelope;
  try {
    side >> envelope;
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix envelope: ") + e.what(), 1, 1);
  }

  F1Matrix m;
  try {
    const auto& grid = envelope.at("grid");
    m.grid.e_min = grid.at("e_min").get<double>();
    m.grid.e_max = grid.at("e_max").get<double>();
    m.grid.n_intervals = grid.at("n_intervals").get<int>();
    const auto& cond = envelope.at("conditions");
    const auto& sensor = cond.at("sensor");
    m.sensor.e_sens = sensor.at("e_sens").get<double>();
    m.sensor.alpha_sens = sensor.at("alpha_sens").get<double>();
    m.sensor.thermistor_depth = sensor.at("thermistor_depth").get<double>();
    m.sensor.sample_rate = sensor.at("sample_rate").get<double>();
    m.sensor.noise_sigma = sensor.at("noise_sigma").get<double>();
    const auto& contact = cond.at("contact");
    m.cond.t_sens0 = contact.at("t_sens0").get<double>();
    m.cond.t_obj0 = contact.at("t_obj0").get<double>();
    m.cond.t_contact = contact.at("t_contact").get<double>();
    m.sigma = cond.at("sigma").get<double>();
    m.source = envelope.at("source").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix envelope: ") + e.what(), 1, 1);
  }
  m.grid.validate();

  auto csv_path = base;
  csv_path += ".csv";
  std::ifstream csv(csv_path);
  if (!csv) throw IoError("cannot open matrix: " + csv_path.string());
  const int n = m.grid.n_intervals;
  m.scores.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::string line;
  long line_no = 0;
  int row = 0;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw ParseError("malformed matrix cell '" + cell + "'", line_no,
                         static_cast<long>(pos) + 1);
      values.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (static_cast<int>(values.size()) != n)
      throw ParseError("expected " + std::to_string(n) + " columns, got " +
                       std::to_string(values.size()), line_no, 1);
    if (line_no == 1) continue;  // header row of midpoints
    if (row >= n) throw ParseError("more data rows than grid intervals", line_no, 1);
    for (int j = 0; j < n; ++j) m.at(row, j) = values[static_cast<std::size_t>(j)];
    ++row;
  }
  if (row != n)
    throw ParseError("expected " + std::to_string(n) + " data rows, got " + std::to_string(row),
                     line_no, 1);
  return m;
}

}  // namespace heatid
