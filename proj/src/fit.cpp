#include "heatid/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>

#include "heatid/special.hpp"

namespace heatid {

namespace {

constexpr double kGradStep = 1e-6;   // in normalized [0,1] coordinates
constexpr double kBoundEps = 1e-9;   // "resting on a bound" detection
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

struct Box {
  std::vector<double> lo, hi;
  std::vector<std::string> names;

  std::size_t size() const { return lo.size(); }
  double denorm(std::size_t i, double y) const { return lo[i] + y * (hi[i] - lo[i]); }
  double norm(std::size_t i, double v) const {
    return std::clamp((v - lo[i]) / (hi[i] - lo[i]), 0.0, 1.0);
  }
};

struct StartOutcome {
  std::vector<double> y;
  double sse = 0.0;
  bool tol_met = false;
  bool stationary = false;  // projected direction vanished / no improvable step
  int iterations = 0;

  bool finished() const { return tol_met || stationary; }
};

using Objective = std::function<double(const std::vector<double>&)>;

std::vector<double> gradient(const Objective& f, const std::vector<double>& y) {
  const std::size_t k = y.size();
  std::vector<double> g(k, 0.0);
  std::vector<double> probe = y;
  for (std::size_t i = 0; i < k; ++i) {
    const double up = std::min(y[i] + kGradStep, 1.0);
    const double down = std::max(y[i] - kGradStep, 0.0);
    probe[i] = up;
    const double f_up = f(probe);
    probe[i] = down;
    const double f_down = f(probe);
    probe[i] = y[i];
    const double span = up - down;
    g[i] = span > 0.0 ? (f_up - f_down) / span : 0.0;
  }
  return g;
}

// Inverse-Hessian BFGS update: H <- (I - r s y^T) H (I - r y s^T) + r s s^T.
void bfgs_update(std::vector<double>& h, const std::vector<double>& s,
                 const std::vector<double>& yv) {
  const std::size_t k = s.size();
  double sy = 0.0, ss = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sy += s[i] * yv[i];
    ss += s[i] * s[i];
    yy += yv[i] * yv[i];
  }
  if (!(sy > 1e-12 * std::sqrt(ss * yy)) || sy == 0.0) return;  // curvature too weak
  const double rho = 1.0 / sy;
  std::vector<double> a(k * k, 0.0);  // I - rho s y^T
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a[i * k + j] = (i == j ? 1.0 : 0.0) - rho * s[i] * yv[j];
  std::vector<double> ah(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += a[i * k + j] * h[j * k + l];
      ah[i * k + l] = acc;
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < k; ++l) acc += ah[i * k + l] * a[j * k + l];
      h[i * k + j] = acc + rho * s[i] * s[j];
    }
}

StartOutcome
minimize_in_box(const Objective& f, std::vector<double> y, double tol, int max_iters) {
  const std::size_t k = y.size();
  StartOutcome out;
  double fy = f(y);
  std::vector<double> g = gradient(f, y);
  std::vector<double> h(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) h[i * k + i] = 1.0;

  int it = 0;
  while (it < max_iters) {
    ++it;
    std::vector<double> d(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += h[i * k + j] * g[j];
      d[i] = -acc;
    }
    auto project = [&](std::vector<double>& dir) {
      for (std::size_t i = 0; i < k; ++i) {
        if ((y[i] <= kBoundEps && dir[i] < 0.0) || (y[i] >= 1.0 - kBoundEps && dir[i] > 0.0))
          dir[i] = 0.0;
      }
    };
    project(d);
    double gd = 0.0;
    for (std::size_t i = 0; i < k; ++i) gd += g[i] * d[i];
    if (gd >= 0.0) {
      // Quasi-Newton direction unusable; fall back to projected steepest descent.
      for (std::size_t i = 0; i < k; ++i) d[i] = -g[i];
      project(d);
      gd = 0.0;
      for (std::size_t i = 0; i < k; ++i) gd += g[i] * d[i];
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) h[i * k + j] = i == j ? 1.0 : 0.0;
    }
    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, std::fabs(v));
    if (dmax == 0.0) {
      out.stationary = true;  // every useful direction points out of the box
      break;
    }

    double alpha = 1.0;
    bool stepped = false;
    std::vector<double> y_try(k);
    double f_try = fy;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      bool moved = false;
      for (std::size_t i = 0; i < k; ++i) {
        y_try[i] = std::clamp(y[i] + alpha * d[i], 0.0, 1.0);
        if (y_try[i] != y[i]) moved = true;
      }
      if (moved) {
        f_try = f(y_try);
        if (f_try <= fy + kArmijo * alpha * gd || f_try < fy) {
          stepped = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!stepped) {
      // No improvable step at floating-point resolution.
      out.stationary = true;
      break;
    }

    const bool tol_hit = std::fabs(fy - f_try) <= tol * std::max(fy, 1e-300);
    std::vector<double> g_new = gradient(f, y_try);
    std::vector<double> s(k), yv(k);
    for (std::size_t i = 0; i < k; ++i) {
      s[i] = y_try[i] - y[i];
      yv[i] = g_new[i] - g[i];
    }
    bfgs_update(h, s, yv);
    y = y_try;
    fy = f_try;
    g = std::move(g_new);
    if (tol_hit) {
      out.tol_met = true;
      break;
    }
  }
  out.y = std::move(y);
  out.sse = fy;
  out.iterations = it;
  return out;
}

}  // namespace

void FitConfig::validate() const {
  auto check = [](const std::array<double, 2>& b, const char* name) {
    if (!(b[0] < b[1]) || !std::isfinite(b[0]) || !std::isfinite(b[1]))
      throw DomainError(std::string(name) + " bounds must satisfy lo < hi");
  };
  check(e_bounds, "e_obj");
  check(offset_bounds, "t_offset");
  if (fit_sensor_params) {
    check(e_sens_bounds, "e_sens");
    check(alpha_bounds, "alpha_sens");
    if (!(e_sens_bounds[0] > 0.0) || !(alpha_bounds[0] > 0.0))
      throw DomainError("sensor parameter bounds must be positive");
  }
  if (!(e_bounds[0] > 0.0)) throw DomainError("e_obj bounds must be positive");
  if (!(convergence_tol > 0.0)) throw DomainError("convergence_tol must be positive");
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
}

double residual_sse(const TemperatureTrace& trace, const SensorParams& sensor, double e_obj,
                    double t_offset) {
  trace.validate();
  sensor.validate();
  MaterialSample{e_obj}.validate();
  if (trace.meta.normalized)
    throw DomainError("cannot fit a normalized trace against the degC model");
  if (!(trace.meta.t_sens0 > trace.meta.t_obj0))
    throw DomainError("trace metadata needs t_sens0 > t_obj0");
  if (!std::isfinite(t_offset)) throw DomainError("t_offset must be finite");

  const double t_sens0 = trace.meta.t_sens0;
  const double t_surf = (t_sens0 * sensor.e_sens + trace.meta.t_obj0 * e_obj) /
                        (sensor.e_sens + e_obj);
  const double coeff = sensor.thermistor_depth / (2.0 * std::sqrt(sensor.alpha_sens));
  double sse = 0.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double shifted = trace.times[i] + t_offset;
    const double model =
        shifted <= 0.0 ? t_sens0 : t_sens0 + (t_surf - t_sens0) * erfc(coeff / std::sqrt(shifted));
    const double r = trace.temps[i] - model;
    sse += r * r;
  }
  return sse;
}

FitResult fit_material(const std::vector<TemperatureTrace>& traces, const SensorParams& sensor,
                       const FitConfig& cfg) {
  cfg.validate();
  sensor.validate();
  if (traces.empty()) throw DomainError("fit_material needs at least one trace");
  const double rate = traces.front().meta.sample_rate;
  for (const auto& tr : traces) {
    tr.validate();
    if (std::fabs(tr.meta.sample_rate - rate) > 1e-9)
      throw DomainError("traces have inconsistent sample rates");
  }

  Box box;
  box.lo = {cfg.e_bounds[0], cfg.offset_bounds[0]};
  box.hi = {cfg.e_bounds[1], cfg.offset_bounds[1]};
  box.names = {"e_obj", "t_offset"};
  if (cfg.fit_sensor_params) {
    box.lo.push_back(cfg.e_sens_bounds[0]);
    box.hi.push_back(cfg.e_sens_bounds[1]);
    box.names.push_back("e_sens");
    box.lo.push_back(cfg.alpha_bounds[0]);
    box.hi.push_back(cfg.alpha_bounds[1]);
    box.names.push_back("alpha_sens");
  }

  const Objective pooled_sse = [&](const std::vector<double>& y) {
    const double e_obj = box.denorm(0, y[0]);
    const double t_offset = box.denorm(1, y[1]);
    SensorParams used = sensor;
    if (cfg.fit_sensor_params) {
      used.e_sens = box.denorm(2, y[2]);
      used.alpha_sens = box.denorm(3, y[3]);
    }
    double total = 0.0;
    for (const auto& tr : traces) total += residual_sse(tr, used, e_obj, t_offset);
    return total;
  };

  bool have_best = false;
  StartOutcome best;
  for (int s = 0; s < 5; ++s) {
    std::vector<double> y0(box.size());
    const double e_start = cfg.e_bounds[0] + s * (cfg.e_bounds[1] - cfg.e_bounds[0]) / 4.0;
    y0[0] = box.norm(0, e_start);
    y0[1] = box.norm(1, 0.0);  // offset starts at zero (clamped into its bounds)
    if (cfg.fit_sensor_params) {
      y0[2] = box.norm(2, sensor.e_sens);
      y0[3] = box.norm(3, sensor.alpha_sens);
    }
    auto outcome = minimize_in_box(pooled_sse, std::move(y0), cfg.convergence_tol, cfg.max_iters);
    if (!have_best || outcome.sse < best.sse ||
        (outcome.sse == best.sse && outcome.finished() && !best.finished())) {
      best = std::move(outcome);
      have_best = true;
    }
  }

  FitResult result;
  result.e_obj = box.denorm(0, best.y[0]);
  result.t_offset = box.denorm(1, best.y[1]);
  if (cfg.fit_sensor_params) {
    result.e_sens = box.denorm(2, best.y[2]);
    result.alpha_sens = box.denorm(3, best.y[3]);
  }
  result.sse = best.sse;
  result.iterations = best.iterations;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (best.y[i] <= kBoundEps || best.y[i] >= 1.0 - kBoundEps)
      result.bound_active.push_back(box.names[i]);
  }
  result.converged = best.finished() && result.bound_active.empty();

  if (!best.finished())
    throw FitNonConvergence("no start met the convergence tolerance within max_iters", result);
  return result;
}

}  // namespace heatid
