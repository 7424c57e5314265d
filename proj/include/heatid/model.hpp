#pragma once

// Closed-form recognition performance: noncentrality of the two-material
// hypothesis test, pairwise F1, minimum distinguishable effusivity difference,
// full pairwise matrices, thresholded binary maps, the map agreement metric,
// and material-level aggregation into a similarity graph.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "heatid/grid.hpp"
#include "heatid/materials.hpp"
#include "heatid/special.hpp"
#include "heatid/thermal.hpp"

namespace heatid {

// Effusivities above this do not occur in the supported material range; the
// delta search treats it as the physical ceiling (also the default grid top).
inline constexpr double kMaxPhysicalEffusivity = 4.0e4;

struct F1Matrix {
  EffusivityGrid grid;
  std::vector<double> scores;  // n*n, row-major, symmetric
  SensorParams sensor;
  ContactConditions cond;
  double sigma = 0.0;        // noise level the scores were computed for
  std::string source;        // "model" or "empirical"

  int n() const { return grid.n_intervals; }
  double at(int i, int j) const { return scores[static_cast<std::size_t>(i) * n() + j]; }
  double& at(int i, int j) { return scores[static_cast<std::size_t>(i) * n() + j]; }
};

struct BinaryMap {
  EffusivityGrid grid;
  std::vector<unsigned char> bits;  // n*n; 1 = distinguishable (score >= phi)
  double phi = 0.9;

  int n() const { return grid.n_intervals; }
  unsigned char at(int i, int j) const { return bits[static_cast<std::size_t>(i) * n() + j]; }
};

struct DeltaResult {
  double delta = 0.0;                    // meaningful only when found
  bool indistinguishable_everywhere = false;  // no offset in range reaches phi
};

struct GraphNode {
  MaterialRecord material;
  double effusivity = 0.0;  // identified value, or range midpoint
};

struct GraphEdge {
  int a = 0;
  int b = 0;
  double avg_f1 = 0.0;
};

// Edges connect material pairs whose averaged F1 falls below phi, i.e. pairs
// the sensor cannot reliably tell apart.
struct NodeGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  double phi = 0.9;
};

// lambda = (T_surf1 - T_surf2)^2 / (sigma^2 dt) * integral_0^tc erfc^2(...) dt,
// the noncentrality of the distance statistic separating the two materials.
// The integral uses adaptive Simpson quadrature to relative error 1e-8.
double noncentrality_lambda(const SensorParams& sensor, double e1, double e2,
                            const ContactConditions& cond, double sigma);

// Predicted F1 of the optimal binary decision between two materials:
// 1 - F_ncF(1; n, n, lambda) with n = floor(t_contact * sample_rate).
double f1_pair(const SensorParams& sensor, double e1, double e2, const ContactConditions& cond,
               double sigma, SeriesTolerance tol = {});

// Smallest offset delta such that e is distinguishable (F1 >= phi) from
// e + delta or e - delta, found by geometric bracket growth from delta0 and
// bisection to relative tolerance 1e-4. Candidates are confined to the
// physical range (0, kMaxPhysicalEffusivity].
DeltaResult min_distinguishable_difference(const SensorParams& sensor, double e,
                                           const ContactConditions& cond, double sigma,
                                           double phi, double delta0 = 80.0);

// Pairwise f1_pair over interval midpoints; symmetric, 0.5 diagonal.
// threads = 0 picks hardware concurrency. Results are independent of the
// thread count.
F1Matrix f1_matrix(const SensorParams& sensor, const EffusivityGrid& grid,
                   const ContactConditions& cond, double sigma, int threads = 0);

BinaryMap binary_map(const F1Matrix& m, double phi);

// Upper-triangle agreement of two equally sized maps as a percentage:
// (1 - sum |a_ij - b_ij| * 2/(n(n-1))) * 100.
double matrix_match(const BinaryMap& a, const BinaryMap& b);

// Mean score over grid cells whose midpoints fall inside the two materials'
// effusivity ranges; a range narrower than one interval snaps to the nearest
// midpoint so every pair stays scoreable.
double material_pair_avg_f1(const F1Matrix& m, const MaterialRecord& mat_a,
                            const MaterialRecord& mat_b);

NodeGraph build_node_graph(const MaterialDatabase& db, const F1Matrix& m, double phi);

// DOT rendering: node width proportional to effusivity (scaled to
// [0.2, 2.0]), fill color fixed per category, edge penwidth proportional to
// 1/avg_f1 (scaled to [0.5, 5.0]). Degenerate scalings (zero spread) use the
// midpoint of the target range.
std::string to_dot(const NodeGraph& graph);

// Matrix serialization: `<base>.csv` (one header row of interval midpoints,
// then n rows by n columns) plus a `<base>.json` envelope with the grid,
// conditions, sigma, and source.
void write_matrix(const std::filesystem::path& base, const F1Matrix& m);
F1Matrix read_matrix(const std::filesystem::path& path);

}  // namespace heatid
