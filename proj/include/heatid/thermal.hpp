#pragma once

// Forward model of a heated tactile sensor touching a semi-infinite object:
// constant contact-surface temperature, transient temperature at the embedded
// thermistor, noisy trace synthesis, and the normalization transform that
// removes the initial sensor temperature.
//
// Temperatures are degrees Celsius throughout; every expression in the model
// is affine in temperature, so the Celsius/Kelvin choice cancels.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace heatid {

struct SensorParams {
  double e_sens = 892.0;            // thermal effusivity, J s^-1/2 K^-1 m^-2
  double alpha_sens = 1.19e-9;      // thermal diffusivity, m^2/s
  double thermistor_depth = 8e-5;   // sensing depth below the contact surface, m
  double sample_rate = 200.0;       // Hz
  double noise_sigma = 0.05;        // additive Gaussian noise, degC

  void validate() const;
};

struct ContactConditions {
  double t_sens0 = 35.0;   // initial (heated) sensor temperature, degC
  double t_obj0 = 25.0;    // initial object temperature = ambient, degC
  double t_contact = 2.0;  // contact duration, s

  void validate() const;
};

struct MaterialSample {
  double effusivity = 0.0;  // J s^-1/2 K^-1 m^-2

  void validate() const;
};

struct TraceMeta {
  std::string material_name;  // empty for purely synthetic traces
  double effusivity = 0.0;    // 0 when unknown (e.g. real recordings)
  double t_sens0 = 0.0;
  double t_obj0 = 0.0;
  double sample_rate = 0.0;
  std::uint64_t seed = 0;
  bool normalized = false;
  double noise_scale = 0.0;  // 1/(t_sens0 - t_obj0) once normalized, else 0
};

struct TemperatureTrace {
  std::vector<double> times;  // s, strictly increasing, uniform spacing
  std::vector<double> temps;  // degC (dimensionless once normalized)
  TraceMeta meta;

  void validate() const;
};

// Portable N(0,1) stream: Box-Muller over mt19937_64 so traces are
// bit-identical across standard libraries.
class NormalSampler {
public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next();

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic per-trace seed from (experiment seed, pair index, trial
// index), so parallel batch generation stays reproducible.
std::uint64_t derive_seed(std::uint64_t experiment_seed, std::uint64_t pair_index,
                          std::uint64_t trial_index);

// Contact-surface temperature: effusivity-weighted mean of the two initial
// temperatures, constant for the whole contact.
double surface_temperature(const SensorParams& sensor, const MaterialSample& material,
                           const ContactConditions& cond);

// Noise-free thermistor temperature at elapsed contact time t:
// t_sens0 + (T_surf - t_sens0) erfc(depth / (2 sqrt(alpha t))).
double mean_temperature(const SensorParams& sensor, const MaterialSample& material,
                        const ContactConditions& cond, double t);

// Mean curve plus i.i.d. N(0, noise_sigma^2), sampled at t_i = i/rate for
// i = 1..floor(t_contact * rate). The t = 0 sample is skipped: it carries no
// information (the erfc argument is infinite there).
TemperatureTrace generate_trace(const SensorParams& sensor, const MaterialSample& material,
                                const ContactConditions& cond, std::uint64_t seed);

// (temps - t_obj0) / (t_sens0 - t_obj0) per sample; the resulting mean curve
// no longer depends on the initial sensor temperature.
TemperatureTrace normalize_trace(const TemperatureTrace& trace, const SensorParams& sensor);

// Effective noise level of normalized traces when the initial sensor
// temperature varies uniformly over [t_min, t_max]: sigma times the average
// of the per-trace scale 1/(T - t_obj0).
double effective_varied_noise(double sigma, double t_min, double t_max, double t_obj0);

}  // namespace heatid
