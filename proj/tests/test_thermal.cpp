#include <doctest.h>

#include <cmath>
#include <random>

#include "heatid/errors.hpp"
#include "heatid/thermal.hpp"

using heatid::ContactConditions;
using heatid::SensorParams;

namespace {

SensorParams default_sensor() { return SensorParams{}; }

}  // namespace

TEST_CASE("default parameters carry the reference sensor") {
  SensorParams s;
  CHECK(s.e_sens == 892.0);
  CHECK(s.alpha_sens == 1.19e-9);
  CHECK(s.thermistor_depth == 8e-5);
  CHECK(s.sample_rate == 200.0);
  CHECK(s.noise_sigma == 0.05);
  ContactConditions c;
  CHECK(c.t_sens0 == 35.0);
  CHECK(c.t_obj0 == 25.0);
  CHECK(c.t_contact == 2.0);
}

TEST_CASE("surface temperature is the effusivity-weighted mean") {
  SensorParams s = default_sensor();
  ContactConditions c;
  // equal effusivities meet in the middle
  CHECK(heatid::surface_temperature(s, {892.0}, c) == doctest::Approx(30.0).epsilon(1e-12));
  // direct formula
  const double e_obj = 2500.0;
  const double want = (35.0 * 892.0 + 25.0 * e_obj) / (892.0 + e_obj);
  CHECK(heatid::surface_temperature(s, {e_obj}, c) == doctest::Approx(want).epsilon(1e-14));
  // a very conductive object pins the interface near its own temperature
  CHECK(heatid::surface_temperature(s, {1e9}, c) == doctest::Approx(25.0).epsilon(1e-5));
  CHECK(heatid::surface_temperature(s, {36800.0}, c) == doctest::Approx(25.23666).epsilon(1e-6));
}

TEST_CASE("surface temperature decreases monotonically with object effusivity") {
  SensorParams s = default_sensor();
  ContactConditions c;
  double prev = heatid::surface_temperature(s, {1.0}, c);
  for (double e = 10.0; e <= 4e4; e *= 1.5) {
    const double cur = heatid::surface_temperature(s, {e}, c);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("mean temperature follows the erfc transient") {
  SensorParams s = default_sensor();
  ContactConditions c;
  const double t_surf = heatid::surface_temperature(s, {2000.0}, c);
  const double coeff = s.thermistor_depth / (2.0 * std::sqrt(s.alpha_sens));
  CHECK(coeff == doctest::Approx(1.159542071304897).epsilon(1e-12));
  for (double t : {0.005, 0.1, 1.0, 2.0}) {
    const double want = c.t_sens0 + (t_surf - c.t_sens0) * std::erfc(coeff / std::sqrt(t));
    CHECK(heatid::mean_temperature(s, {2000.0}, c, t) == doctest::Approx(want).epsilon(1e-13));
  }
  // the buried thermistor has seen nothing at t = 0
  CHECK(heatid::mean_temperature(s, {2000.0}, c, 0.0) == doctest::Approx(35.0));
}

TEST_CASE("mean curves of two materials never cross for t > 0") {
  SensorParams s = default_sensor();
  ContactConditions c;
  const double ta = heatid::surface_temperature(s, {500.0}, c);
  const double tb = heatid::surface_temperature(s, {5000.0}, c);
  const double expected_sign = ta > tb ? 1.0 : -1.0;
  // Below ~0.05 s both curves round to exactly t_sens0 in double precision
  // (the erfc tail is smaller than one ulp of 35), so start where the
  // separation is representable.
  for (double t = 0.05; t <= 2.0; t += 0.0311) {
    const double diff =
        heatid::mean_temperature(s, {500.0}, c, t) - heatid::mean_temperature(s, {5000.0}, c, t);
    CHECK(diff * expected_sign > 0.0);
  }
}

TEST_CASE("trace generation: length, timestamps, determinism") {
  SensorParams s = default_sensor();
  ContactConditions c;
  auto tr = heatid::generate_trace(s, {1500.0}, c, 77);
  CHECK(tr.temps.size() == 400);  // floor(2 s * 200 Hz)
  CHECK(tr.times.size() == 400);
  CHECK(tr.times.front() == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(tr.times.back() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tr.meta.effusivity == 1500.0);
  CHECK(tr.meta.seed == 77);
  CHECK_FALSE(tr.meta.normalized);

  auto again = heatid::generate_trace(s, {1500.0}, c, 77);
  CHECK(tr.temps == again.temps);
  auto other = heatid::generate_trace(s, {1500.0}, c, 78);
  CHECK(tr.temps != other.temps);

  ContactConditions frac = c;
  frac.t_contact = 1.2345;
  CHECK(heatid::generate_trace(s, {1500.0}, frac, 1).temps.size() == 246);
}

TEST_CASE("noise-free traces reproduce the mean curve exactly") {
  SensorParams s = default_sensor();
  s.noise_sigma = 0.0;
  ContactConditions c;
  auto tr = heatid::generate_trace(s, {3000.0}, c, 5);
  for (std::size_t i = 0; i < tr.temps.size(); ++i) {
    const double want = heatid::mean_temperature(s, {3000.0}, c, tr.times[i]);
    CHECK(tr.temps[i] == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("trace noise has the requested scale") {
  SensorParams s = default_sensor();
  s.noise_sigma = 0.05;
  ContactConditions c;
  double ss = 0.0;
  long count = 0;
  for (int k = 0; k < 25; ++k) {
    auto tr = heatid::generate_trace(s, {3000.0}, c, 1000 + k);
    for (std::size_t i = 0; i < tr.temps.size(); ++i) {
      const double resid = tr.temps[i] - heatid::mean_temperature(s, {3000.0}, c, tr.times[i]);
      ss += resid * resid;
      ++count;
    }
  }
  const double sd = std::sqrt(ss / count);  // 10000 residuals: ~1.4% relative spread
  CHECK(sd == doctest::Approx(0.05).epsilon(0.06));
}

TEST_CASE("sampler moments") {
  heatid::NormalSampler rng(31337);
  double sum = 0.0, ss = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next();
    sum += z;
    ss += z * z;
  }
  const double mean = sum / n;
  const double var = ss / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("derived seeds separate neighbouring streams") {
  const auto base = heatid::derive_seed(1, 2, 3);
  CHECK(base == heatid::derive_seed(1, 2, 3));
  CHECK(base != heatid::derive_seed(1, 2, 4));
  CHECK(base != heatid::derive_seed(1, 3, 3));
  CHECK(base != heatid::derive_seed(2, 2, 3));
}

TEST_CASE("normalization maps traces onto the common dimensionless curve") {
  SensorParams s = default_sensor();
  s.noise_sigma = 0.0;
  ContactConditions c;
  auto tr = heatid::generate_trace(s, {2000.0}, c, 9);
  auto norm = heatid::normalize_trace(tr, s);
  CHECK(norm.meta.normalized);
  CHECK(norm.meta.noise_scale == doctest::Approx(1.0 / 10.0).epsilon(1e-14));
  // dimensionless mean: 1 - (e_obj/(e_sens+e_obj)) erfc(x / 2 sqrt(alpha t))
  const double coeff = s.thermistor_depth / (2.0 * std::sqrt(s.alpha_sens));
  for (std::size_t i = 0; i < norm.temps.size(); ++i) {
    const double want =
        1.0 - 2000.0 / (892.0 + 2000.0) * std::erfc(coeff / std::sqrt(norm.times[i]));
    CHECK(norm.temps[i] == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK_THROWS_AS(heatid::normalize_trace(norm, s), heatid::DomainError);
}

TEST_CASE("normalization of noise-free traces is invariant to the initial sensor temperature") {
  SensorParams s = default_sensor();
  s.noise_sigma = 0.0;
  std::vector<std::vector<double>> normalized;
  for (double t0 : {30.0, 32.5, 35.0}) {
    ContactConditions c;
    c.t_sens0 = t0;
    auto norm = heatid::normalize_trace(heatid::generate_trace(s, {1800.0}, c, 4), s);
    normalized.push_back(norm.temps);
  }
  for (std::size_t i = 0; i < normalized[0].size(); ++i) {
    CHECK(std::abs(normalized[0][i] - normalized[1][i]) <= 1e-10);
    CHECK(std::abs(normalized[1][i] - normalized[2][i]) <= 1e-10);
  }
}

TEST_CASE("degenerate normalization is rejected") {
  heatid::TemperatureTrace tr;
  tr.times = {0.005, 0.01};
  tr.temps = {25.0, 25.0};
  tr.meta.t_sens0 = 25.0;
  tr.meta.t_obj0 = 25.0;
  tr.meta.sample_rate = 200.0;
  CHECK_THROWS_AS(heatid::normalize_trace(tr, default_sensor()),
                  heatid::DegenerateNormalizationError);
}

TEST_CASE("effective noise under varied initial temperatures") {
  // closed form of the averaged per-trace scale
  CHECK(heatid::effective_varied_noise(0.05, 30.0, 35.0, 25.0) ==
        doctest::Approx(0.05 * std::log(2.0) / 5.0).epsilon(1e-12));
  CHECK(heatid::effective_varied_noise(0.0, 30.0, 35.0, 25.0) == 0.0);
  // a collapsing band tends to the single-trace scale
  CHECK(heatid::effective_varied_noise(0.05, 30.0, 30.0 + 1e-9, 25.0) ==
        doctest::Approx(0.05 / 5.0).epsilon(1e-6));
  CHECK_THROWS_AS(heatid::effective_varied_noise(0.05, 35.0, 30.0, 25.0), heatid::DomainError);
  CHECK_THROWS_AS(heatid::effective_varied_noise(0.05, 25.0, 35.0, 25.0), heatid::DomainError);
}

TEST_CASE("validation rejects unphysical inputs") {
  SensorParams s = default_sensor();
  s.e_sens = -1.0;
  CHECK_THROWS_AS(s.validate(), heatid::DomainError);
  s = default_sensor();
  s.sample_rate = 0.0;
  CHECK_THROWS_AS(s.validate(), heatid::DomainError);

  ContactConditions c;
  c.t_sens0 = 25.0;
  c.t_obj0 = 25.0;
  CHECK_THROWS_AS(c.validate(), heatid::DomainError);
  c = ContactConditions{};
  c.t_contact = -2.0;
  CHECK_THROWS_AS(c.validate(), heatid::DomainError);

  ContactConditions tiny;
  tiny.t_contact = 1e-4;  // under one sample period
  CHECK_THROWS_AS(heatid::generate_trace(default_sensor(), {1000.0}, tiny, 0),
                  heatid::EmptyTraceError);
}
