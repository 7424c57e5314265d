#include "heatid/thermal.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>

#include "heatid/errors.hpp"
#include "heatid/special.hpp"

namespace heatid {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

void SensorParams::validate() const {
  require_positive(e_sens, "e_sens");
  require_positive(alpha_sens, "alpha_sens");
  require_positive(thermistor_depth, "thermistor_depth");
  require_positive(sample_rate, "sample_rate");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw DomainError("noise_sigma must be non-negative");
}

void ContactConditions::validate() const {
  require_positive(t_contact, "t_contact");
  if (!std::isfinite(t_sens0) || !std::isfinite(t_obj0))
    throw DomainError("initial temperatures must be finite");
  if (!(t_sens0 > t_obj0))
    throw DomainError("t_sens0 must exceed t_obj0 (heat flows sensor -> object)");
}

void MaterialSample::validate() const { require_positive(effusivity, "effusivity"); }

void TemperatureTrace::validate() const {
  if (times.size() != temps.size()) throw DomainError("trace times/temps length mismatch");
  if (times.empty()) throw EmptyTraceError("trace has no samples");
  if (times.size() >= 2) {
    const double dt = times[1] - times[0];
    if (!(dt > 0.0)) throw DomainError("trace times must be strictly increasing");
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double step = times[i] - times[i - 1];
      if (std::fabs(step - dt) > 1e-9) throw DomainError("trace time spacing is not uniform");
    }
  }
}

double NormalSampler::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // 53-bit uniforms; u1 shifted onto (0, 1] so the log is always finite.
  const double u1 = 1.0 - static_cast<double>(gen_() >> 11) * 0x1p-53;
  const double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t derive_seed(std::uint64_t experiment_seed, std::uint64_t pair_index,
                          std::uint64_t trial_index) {
  return splitmix64(splitmix64(splitmix64(experiment_seed) ^ pair_index) ^ trial_index);
}

double surface_temperature(const SensorParams& sensor, const MaterialSample& material,
                           const ContactConditions& cond) {
  sensor.validate();
  material.validate();
  cond.validate();
  return (cond.t_sens0 * sensor.e_sens + cond.t_obj0 * material.effusivity) /
         (sensor.e_sens + material.effusivity);
}

double mean_temperature(const SensorParams& sensor, const MaterialSample& material,
                        const ContactConditions& cond, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("elapsed time must be >= 0");
  const double t_surf = surface_temperature(sensor, material, cond);
  if (t == 0.0) return cond.t_sens0;  // erfc argument -> infinity
  const double arg = sensor.thermistor_depth / (2.0 * std::sqrt(sensor.alpha_sens * t));
  return cond.t_sens0 + (t_surf - cond.t_sens0) * erfc(arg);
}

TemperatureTrace generate_trace(const SensorParams& sensor, const MaterialSample& material,
                                const ContactConditions& cond, std::uint64_t seed) {
  sensor.validate();
  material.validate();
  cond.validate();
  const auto n = static_cast<long>(std::floor(cond.t_contact * sensor.sample_rate));
  if (n < 1) throw EmptyTraceError("t_contact * sample_rate < 1 yields no samples");

  const double dt = 1.0 / sensor.sample_rate;
  TemperatureTrace trace;
  trace.times.reserve(static_cast<std::size_t>(n));
  trace.temps.reserve(static_cast<std::size_t>(n));
  NormalSampler rng(seed);
  for (long i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    trace.times.push_back(t);
    trace.temps.push_back(mean_temperature(sensor, material, cond, t) +
                          sensor.noise_sigma * rng.next());
  }
  trace.meta.effusivity = material.effusivity;
  trace.meta.t_sens0 = cond.t_sens0;
  trace.meta.t_obj0 = cond.t_obj0;
  trace.meta.sample_rate = sensor.sample_rate;
  trace.meta.seed = seed;
  trace.meta.normalized = false;
  return trace;
}

TemperatureTrace normalize_trace(const TemperatureTrace& trace, const SensorParams& sensor) {
  sensor.validate();
  trace.validate();
  if (trace.meta.normalized) throw DomainError("trace is already normalized");
  if (trace.meta.t_sens0 == trace.meta.t_obj0)
    throw DegenerateNormalizationError("t_sens0 == t_obj0: normalization scale is undefined");
  if (!(trace.meta.t_sens0 > trace.meta.t_obj0))
    throw DomainError("normalization requires t_sens0 > t_obj0");

  const double scale = 1.0 / (trace.meta.t_sens0 - trace.meta.t_obj0);
  TemperatureTrace out = trace;
  for (double& v : out.temps) v = (v - trace.meta.t_obj0) * scale;
  out.meta.normalized = true;
  out.meta.noise_scale = scale;
  return out;
}

double effective_varied_noise(double sigma, double t_min, double t_max, double t_obj0) {
  if (!std::isfinite(sigma) || sigma < 0.0) throw DomainError("sigma must be non-negative");
  if (!(t_obj0 < t_min && t_min < t_max))
    throw DomainError("effective_varied_noise requires t_obj0 < t_min < t_max");
  return sigma * (std::log(t_max - t_obj0) - std::log(t_min - t_obj0)) / (t_max - t_min);
}

}  // namespace heatid
