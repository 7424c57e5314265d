#include <doctest.h>

#include <cmath>
#include <vector>

#include "heatid/classifier.hpp"
#include "heatid/errors.hpp"
#include "heatid/grid.hpp"
#include "heatid/materials.hpp"
#include "heatid/model.hpp"
#include "heatid/thermal.hpp"

using heatid::ContactConditions;
using heatid::SensorParams;
using heatid::TemperatureTrace;

namespace {

SensorParams noisy_sensor(double sigma = 0.05) {
  SensorParams s;
  s.noise_sigma = sigma;
  return s;
}

std::vector<TemperatureTrace> make_traces(double effusivity, int count, std::uint64_t seed0,
                                          double sigma = 0.05, double t_sens0 = 35.0) {
  ContactConditions c;
  c.t_sens0 = t_sens0;
  std::vector<TemperatureTrace> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k)
    out.push_back(heatid::generate_trace(noisy_sensor(sigma), {effusivity}, c, seed0 + k));
  return out;
}

TemperatureTrace synthetic_trace(const std::vector<double>& temps) {
  TemperatureTrace tr;
  tr.temps = temps;
  tr.times.resize(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) tr.times[i] = 0.005 * (i + 1);
  tr.meta.sample_rate = 200.0;
  tr.meta.t_sens0 = 35.0;
  tr.meta.t_obj0 = 25.0;
  return tr;
}

}  // namespace

TEST_CASE("feature vector layout: raw temperatures then local slopes") {
  auto tr = synthetic_trace(std::vector<double>(40, 31.5));
  const auto fv = heatid::extract_features(tr, 11);
  REQUIRE(fv.values.size() == 80);
  for (int i = 0; i < 40; ++i) CHECK(fv.values[i] == 31.5);
  for (int i = 40; i < 80; ++i) CHECK(fv.values[i] == 0.0);  // constant trace has no slope
}

TEST_CASE("least-squares slopes recover a linear trend exactly, edges included") {
  std::vector<double> temps(50);
  for (std::size_t i = 0; i < temps.size(); ++i) temps[i] = 30.0 - 1.75 * 0.005 * (i + 1.0);
  const auto fv = heatid::extract_features(synthetic_trace(temps), 11);
  for (std::size_t i = temps.size(); i < fv.values.size(); ++i)
    CHECK(fv.values[i] == doctest::Approx(-1.75).epsilon(1e-9));
}

TEST_CASE("windowed slopes are quieter than first differences") {
  auto tr = heatid::generate_trace(noisy_sensor(0.05), {2000.0}, ContactConditions{}, 11);
  const auto fv = heatid::extract_features(tr, 11);
  const std::size_t n = tr.temps.size();

  auto stddev = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / v.size());
  };
  std::vector<double> slopes(fv.values.begin() + n, fv.values.end());
  std::vector<double> diffs;
  for (std::size_t i = 1; i < n; ++i)
    diffs.push_back((tr.temps[i] - tr.temps[i - 1]) / (tr.times[i] - tr.times[i - 1]));
  CHECK(stddev(slopes) < stddev(diffs));
}

TEST_CASE("feature extraction rejects bad windows") {
  auto tr = synthetic_trace(std::vector<double>(20, 30.0));
  CHECK_THROWS_AS(heatid::extract_features(tr, 4), heatid::DomainError);
  CHECK_THROWS_AS(heatid::extract_features(tr, 1), heatid::DomainError);
  CHECK_THROWS_AS(heatid::extract_features(tr, 21), heatid::DomainError);
}

TEST_CASE("cross-validated F1 is deterministic") {
  auto a = make_traces(900.0, 9, 100);
  auto b = make_traces(1500.0, 9, 200);
  const auto r1 = heatid::train_eval_pair(a, b);
  const auto r2 = heatid::train_eval_pair(a, b);
  CHECK(r1.f1 == r2.f1);
  CHECK(r1.per_fold == r2.per_fold);
  CHECK(r1.folds == 3);
  CHECK(r1.per_fold.size() == 3);
}

TEST_CASE("indistinguishable classes score near chance") {
  // same effusivity, consecutive seeds from one experiment stream
  auto a = make_traces(2000.0, 24, 3000);
  auto b = make_traces(2000.0, 24, 3024);
  const auto r = heatid::train_eval_pair(a, b);
  CHECK(r.f1 > 0.25);
  CHECK(r.f1 < 0.75);
}

TEST_CASE("widely separated classes are recognized nearly perfectly") {
  // foam against metal
  auto a = make_traces(100.0, 50, 500);
  auto b = make_traces(30000.0, 50, 900);
  const auto r = heatid::train_eval_pair(a, b);
  CHECK(r.f1 >= 0.99);
  // swapping the class roles cannot change a perfect separation
  const auto swapped = heatid::train_eval_pair(b, a);
  CHECK(swapped.f1 == doctest::Approx(r.f1).epsilon(1e-12));
}

TEST_CASE("label swap leaves a moderate pair nearly unchanged") {
  auto a = make_traces(2000.0, 21, 40);
  auto b = make_traces(2350.0, 21, 70);
  const double ab = heatid::train_eval_pair(a, b).f1;
  const double ba = heatid::train_eval_pair(b, a).f1;
  CHECK(std::abs(ab - ba) <= 0.15);
}

TEST_CASE("margin classifier approaches the likelihood-ratio oracle when separable") {
  auto a = make_traces(500.0, 30, 1);
  auto b = make_traces(5000.0, 30, 31);
  const double clf = heatid::train_eval_pair(a, b).f1;
  const double oracle = heatid::f1_pair(SensorParams{}, 500.0, 5000.0, ContactConditions{}, 0.05);
  CHECK(clf >= oracle - 0.05);
}

TEST_CASE("cross-validation input validation") {
  auto a = make_traces(900.0, 2, 0);
  auto b = make_traces(1500.0, 9, 50);
  CHECK_THROWS_AS(heatid::train_eval_pair(a, b), heatid::StratificationError);
  CHECK_THROWS_AS(heatid::train_eval_pair(b, a), heatid::StratificationError);

  auto a_ok = make_traces(900.0, 9, 0);
  auto mixed = make_traces(1500.0, 9, 50);
  ContactConditions shorter;
  shorter.t_contact = 1.0;
  mixed[4] = heatid::generate_trace(noisy_sensor(), {1500.0}, shorter, 99);
  CHECK_THROWS_AS(heatid::train_eval_pair(a_ok, mixed), heatid::DimensionError);

  auto b_ok = make_traces(1500.0, 9, 50);
  CHECK_THROWS_AS(heatid::train_eval_pair(a_ok, b_ok, 1), heatid::DomainError);
  CHECK_THROWS_AS(heatid::train_eval_pair(a_ok, b_ok, 3, 0.0), heatid::DomainError);
}

TEST_CASE("Monte-Carlo oracle: identical classes flip a coin") {
  const double f1 =
      heatid::mc_oracle_f1(SensorParams{}, 1500.0, 1500.0, ContactConditions{}, 0.05, 2000, 7);
  CHECK(std::abs(f1 - 0.5) <= 3.0 / std::sqrt(2000.0));
}

TEST_CASE("Monte-Carlo oracle: vanishing noise separates deterministically") {
  const double f1 =
      heatid::mc_oracle_f1(SensorParams{}, 1000.0, 1100.0, ContactConditions{}, 0.0, 1000, 7);
  CHECK(f1 == 1.0);
}

TEST_CASE("Monte-Carlo oracle is seeded and validated") {
  const auto run = [&](std::uint64_t seed) {
    return heatid::mc_oracle_f1(SensorParams{}, 800.0, 1200.0, ContactConditions{}, 0.1, 1500,
                                seed);
  };
  CHECK(run(5) == run(5));
  CHECK_THROWS_AS(heatid::mc_oracle_f1(SensorParams{}, 800.0, 1200.0, ContactConditions{}, 0.1,
                                       999, 5),
                  heatid::DomainError);
}

TEST_CASE("Monte-Carlo oracle brackets the closed form") {
  struct Probe {
    double e1, e2, sigma;
  };
  const Probe probes[] = {{900.0, 1080.0, 0.30}, {5000.0, 9000.0, 0.12}};
  for (const auto& p : probes) {
    const double closed = heatid::f1_pair(SensorParams{}, p.e1, p.e2, ContactConditions{}, p.sigma);
    const double mc =
        heatid::mc_oracle_f1(SensorParams{}, p.e1, p.e2, ContactConditions{}, p.sigma, 20000, 99);
    CHECK(std::abs(closed - mc) <= 0.02);
  }
}

TEST_CASE("Monte-Carlo error shrinks as pairs grow") {
  ContactConditions brief;
  brief.t_contact = 1.0;
  struct Probe {
    double e1, e2, sigma;
  };
  const Probe probes[] = {{700.0, 840.0, 0.2},
                          {1500.0, 1950.0, 0.3},
                          {4000.0, 5200.0, 0.25},
                          {250.0, 310.0, 0.15},
                          {10000.0, 16000.0, 0.35}};
  double coarse_total = 0.0, fine_total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& p = probes[i];
    const double closed = heatid::f1_pair(SensorParams{}, p.e1, p.e2, brief, p.sigma);
    coarse_total +=
        std::abs(closed - heatid::mc_oracle_f1(SensorParams{}, p.e1, p.e2, brief, p.sigma, 1000,
                                               40 + i));
    fine_total +=
        std::abs(closed - heatid::mc_oracle_f1(SensorParams{}, p.e1, p.e2, brief, p.sigma, 27000,
                                               40 + i));
  }
  CHECK(fine_total < coarse_total);
}

TEST_CASE("empirical matrix: shape, determinism, thread invariance") {
  SensorParams s;
  heatid::EffusivityGrid grid{0.0, 4.0e4, 4};
  const auto m = heatid::empirical_matrix(s, grid, ContactConditions{}, 0.05, 6, 77, 1);
  CHECK(m.source == "empirical");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(m.at(i, j) == m.at(j, i));

  const auto again = heatid::empirical_matrix(s, grid, ContactConditions{}, 0.05, 6, 77, 1);
  CHECK(again.scores == m.scores);
  const auto threaded = heatid::empirical_matrix(s, grid, ContactConditions{}, 0.05, 6, 77, 3);
  CHECK(threaded.scores == m.scores);
  const auto reseeded = heatid::empirical_matrix(s, grid, ContactConditions{}, 0.05, 6, 78, 1);
  CHECK(reseeded.scores != m.scores);
}

TEST_CASE("empirical matrix diagonal behaves like chance at full trial count") {
  SensorParams s;
  heatid::EffusivityGrid grid{0.0, 4.0e4, 3};
  const auto m = heatid::empirical_matrix(s, grid, ContactConditions{}, 0.05, 50, 2026, 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(m.at(i, i) >= 0.3);
    CHECK(m.at(i, i) <= 0.7);
  }
}

TEST_CASE("empirical matrix separates far intervals once cells are narrow") {
  // On a 3-interval grid the within-cell spread swallows the class gap
  // (uniform draws from [0, 13333] vs [26667, 40000] can differ by 0.02 C),
  // so a far pair only scores highly on a finer grid. Even there the lowest
  // interval spans an 8.5 C surface-temperature range against a 0.45 C
  // cross-class gap, so expect comfortably above the 0.9 distinguishability
  // threshold rather than exactly 1.
  SensorParams s;
  heatid::EffusivityGrid grid{0.0, 4.0e4, 8};
  const auto m = heatid::empirical_matrix(s, grid, ContactConditions{}, 0.05, 36, 2027, 1);
  CHECK(m.at(0, 7) >= 0.95);
}

TEST_CASE("empirical matrix input validation") {
  SensorParams s;
  heatid::EffusivityGrid grid{0.0, 4.0e4, 3};
  CHECK_THROWS_AS(heatid::empirical_matrix(s, grid, ContactConditions{}, 0.05, 2, 1, 1),
                  heatid::StratificationError);
  CHECK_THROWS_AS(heatid::empirical_matrix(s, grid, ContactConditions{}, 0.0, 6, 1, 1),
                  heatid::DomainError);
}
