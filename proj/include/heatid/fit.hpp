#pragma once

// Parameter identification from recorded traces: box-constrained least
// squares over object effusivity, a shared contact-time offset, and
// optionally the sensor constants.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heatid/errors.hpp"
#include "heatid/thermal.hpp"

namespace heatid {

struct FitConfig {
  std::array<double, 2> e_bounds{30.5, 4.0e4};
  std::array<double, 2> offset_bounds{-1.0, 1.0};        // s
  bool fit_sensor_params = false;
  std::array<double, 2> e_sens_bounds{100.0, 5000.0};    // used when fit_sensor_params
  std::array<double, 2> alpha_bounds{1e-10, 1e-7};       // m^2/s, same
  double convergence_tol = 1e-10;  // relative SSE change
  int max_iters = 200;

  void validate() const;
};

struct FitResult {
  double e_obj = 0.0;
  double t_offset = 0.0;
  std::optional<double> e_sens;      // set when sensor params were fitted
  std::optional<double> alpha_sens;
  double sse = 0.0;                  // degC^2
  bool converged = false;
  int iterations = 0;                // of the winning start
  // Parameters resting on a bound at the optimum. A non-empty list forces
  // converged = false: the unconstrained optimum lies outside the box.
  std::vector<std::string> bound_active;
};

// Thrown when every start exhausts max_iters without meeting the tolerance;
// carries the best parameters seen so far.
class FitNonConvergence : public Error {
public:
  FitNonConvergence(const std::string& what, FitResult best)
      : Error(what), best(std::move(best)) {}

  FitResult best;
};

// Sum of squared deviations between the trace and the mean curve for
// (e_obj, t_offset); samples whose shifted time t + t_offset <= 0 are
// compared against the initial sensor temperature.
double residual_sse(const TemperatureTrace& trace, const SensorParams& sensor, double e_obj,
                    double t_offset);

// Minimizes the pooled SSE of all traces by projected quasi-Newton descent
// with central-difference gradients in a normalized parameter box,
// multi-started from 5 evenly spaced effusivities in e_bounds. One time
// offset is shared by all traces. Deterministic.
FitResult fit_material(const std::vector<TemperatureTrace>& traces, const SensorParams& sensor,
                       const FitConfig& cfg);

}  // namespace heatid
