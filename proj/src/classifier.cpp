#include "heatid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "heatid/errors.hpp"
#include "heatid/materials.hpp"

namespace heatid {

namespace {

constexpr int kEpochs = 500;

struct Dataset {
  std::vector<double> x;  // n rows of dim features, row-major
  std::vector<int> y;     // -1 / +1
  std::size_t dim = 0;

  std::size_t size() const { return y.size(); }
  const double* row(std::size_t i) const { return x.data() + i * dim; }
};

// Mean/std over the train split only; constant features get unit scale so
// standardization never divides by zero.
void standardize(Dataset& train, Dataset& val) {
  const std::size_t dim = train.dim;
  std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const double* row = train.row(i);
    for (std::size_t f = 0; f < dim; ++f) mean[f] += row[f];
  }
  for (std::size_t f = 0; f < dim; ++f) mean[f] /= static_cast<double>(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const double* row = train.row(i);
    for (std::size_t f = 0; f < dim; ++f) {
      const double c = row[f] - mean[f];
      sd[f] += c * c;
    }
  }
  for (std::size_t f = 0; f < dim; ++f) {
    sd[f] = std::sqrt(sd[f] / static_cast<double>(train.size()));
    if (sd[f] < 1e-12) sd[f] = 1.0;
  }
  auto apply = [&](Dataset& ds) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      double* row = ds.x.data() + i * dim;
      for (std::size_t f = 0; f < dim; ++f) row[f] = (row[f] - mean[f]) / sd[f];
    }
  };
  apply(train);
  apply(val);
}

struct LinearModel {
  std::vector<double> w;
  double bias = 0.0;
};

// Full-batch subgradient descent on hinge + L2 over the weights; the bias is
// unpenalized. With eta_t = 1/(lambda t) the update is
// w <- (1 - 1/t) w + acc/(lambda t n), acc = sum of margin-violating y_i x_i,
// and b <- b + acc_b/(lambda t n).
LinearModel train_hinge(const Dataset& train, double c_reg) {
  const std::size_t n = train.size();
  const std::size_t dim = train.dim;
  const double lambda = 1.0 / (static_cast<double>(n) * c_reg);
  LinearModel model;
  model.w.assign(dim, 0.0);
  std::vector<double> acc(dim, 0.0);
  for (int t = 1; t <= kEpochs; ++t) {
    std::fill(acc.begin(), acc.end(), 0.0);
    double acc_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = train.row(i);
      double score = model.bias;
      for (std::size_t f = 0; f < dim; ++f) score += model.w[f] * row[f];
      if (train.y[i] * score < 1.0) {
        const double yi = train.y[i];
        for (std::size_t f = 0; f < dim; ++f) acc[f] += yi * row[f];
        acc_b += yi;
      }
    }
    const double keep = 1.0 - 1.0 / static_cast<double>(t);
    const double step = 1.0 / (lambda * static_cast<double>(t) * static_cast<double>(n));
    for (std::size_t f = 0; f < dim; ++f) model.w[f] = keep * model.w[f] + step * acc[f];
    model.bias += step * acc_b;
  }
  return model;
}

double fold_f1(const LinearModel& model, const Dataset& val) {
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < val.size(); ++i) {
    const double* row = val.row(i);
    double score = model.bias;
    for (std::size_t f = 0; f < val.dim; ++f) score += model.w[f] * row[f];
    const int pred = score >= 0.0 ? 1 : -1;
    if (val.y[i] == 1 && pred == 1) ++tp;
    if (val.y[i] == -1 && pred == 1) ++fp;
    if (val.y[i] == 1 && pred == -1) ++fn;
  }
  const double denom = 2.0 * tp + fp + fn;
  return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

long checked_samples(const SensorParams& sensor, const ContactConditions& cond) {
  const auto n = static_cast<long>(std::floor(cond.t_contact * sensor.sample_rate));
  if (n < 1) throw DomainError("contact window shorter than one sample period");
  return n;
}

}  // namespace

FeatureVector extract_features(const TemperatureTrace& trace, int slope_window) {
  trace.validate();
  const auto len = static_cast<long>(trace.temps.size());
  if (slope_window < 3 || slope_window % 2 == 0)
    throw DomainError("slope_window must be odd and >= 3");
  if (slope_window > len) throw DomainError("slope_window exceeds trace length");

  FeatureVector fv;
  fv.values.reserve(2 * static_cast<std::size_t>(len));
  fv.values.insert(fv.values.end(), trace.temps.begin(), trace.temps.end());

  const long half = (slope_window - 1) / 2;
  for (long i = 0; i < len; ++i) {
    const long lo = std::max<long>(0, i - half);
    const long hi = std::min<long>(len - 1, i + half);
    const long count = hi - lo + 1;
    double t_mean = 0.0, v_mean = 0.0;
    for (long k = lo; k <= hi; ++k) {
      t_mean += trace.times[static_cast<std::size_t>(k)];
      v_mean += trace.temps[static_cast<std::size_t>(k)];
    }
    t_mean /= static_cast<double>(count);
    v_mean /= static_cast<double>(count);
    double num = 0.0, den = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double dt = trace.times[static_cast<std::size_t>(k)] - t_mean;
      num += dt * (trace.temps[static_cast<std::size_t>(k)] - v_mean);
      den += dt * dt;
    }
    fv.values.push_back(den > 0.0 ? num / den : 0.0);
  }
  return fv;
}

CVResult train_eval_pair(const std::vector<TemperatureTrace>& traces_a,
                         const std::vector<TemperatureTrace>& traces_b, int folds,
                         double c_reg) {
  if (folds < 2) throw DomainError("cross-validation needs at least 2 folds");
  if (!(c_reg > 0.0)) throw DomainError("regularization hyperparameter must be positive");
  if (traces_a.size() < static_cast<std::size_t>(folds) ||
      traces_b.size() < static_cast<std::size_t>(folds))
    throw StratificationError("need at least one trace per class per fold");
  const std::size_t len = traces_a.front().temps.size();
  for (const auto& tr : traces_a)
    if (tr.temps.size() != len) throw DimensionError("traces have differing lengths");
  for (const auto& tr : traces_b)
    if (tr.temps.size() != len) throw DimensionError("traces have differing lengths");

  std::vector<FeatureVector> fa, fb;
  fa.reserve(traces_a.size());
  fb.reserve(traces_b.size());
  for (const auto& tr : traces_a) fa.push_back(extract_features(tr));
  for (const auto& tr : traces_b) fb.push_back(extract_features(tr));
  const std::size_t dim = fa.front().values.size();

  CVResult result;
  result.folds = folds;
  for (int fold = 0; fold < folds; ++fold) {
    Dataset train, val;
    train.dim = val.dim = dim;
    auto push = [&](const FeatureVector& fv, int label, bool in_val) {
      Dataset& target = in_val ? val : train;
      target.x.insert(target.x.end(), fv.values.begin(), fv.values.end());
      target.y.push_back(label);
    };
    for (std::size_t i = 0; i < fa.size(); ++i)
      push(fa[i], -1, static_cast<int>(i % folds) == fold);
    for (std::size_t i = 0; i < fb.size(); ++i)
      push(fb[i], +1, static_cast<int>(i % folds) == fold);

    standardize(train, val);
    const auto model = train_hinge(train, c_reg);
    result.per_fold.push_back(fold_f1(model, val));
  }
  double sum = 0.0;
  for (double v : result.per_fold) sum += v;
  result.f1 = sum / static_cast<double>(folds);
  return result;
}

double mc_oracle_f1(const SensorParams& sensor, double e1, double e2,
                    const ContactConditions& cond, double sigma, long n_pairs,
                    std::uint64_t seed) {
  if (n_pairs < 1000) throw DomainError("mc_oracle_f1 needs n_pairs >= 1000");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be non-negative");
  sensor.validate();
  cond.validate();
  const long n = checked_samples(sensor, cond);
  const double dt = 1.0 / sensor.sample_rate;

  std::vector<double> gap(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1) * dt;
    gap[static_cast<std::size_t>(i)] = mean_temperature(sensor, {e1}, cond, t) -
                                       mean_temperature(sensor, {e2}, cond, t);
  }

  NormalSampler rng(seed);
  long tp = 0, fp = 0, fn = 0;
  for (long p = 0; p < n_pairs; ++p) {
    // Squared distances to the class-2 mean curve: x for the class-1 trace,
    // y for the class-2 trace. x/sigma^2 is noncentral chi-square, y/sigma^2
    // central — their comparison is the noncentral-F event behind f1_pair.
    double x = 0.0, y = 0.0;
    for (long i = 0; i < n; ++i) {
      const double r = gap[static_cast<std::size_t>(i)] + sigma * rng.next();
      x += r * r;
    }
    for (long i = 0; i < n; ++i) {
      const double r = sigma * rng.next();
      y += r * r;
    }
    if (x < y) {
      // The class-1 trace is the likelier class-2 candidate of the pair: one
      // false positive plus one false negative.
      ++fp;
      ++fn;
    } else {
      ++tp;  // and one true negative, which F1 ignores
    }
  }
  return 2.0 * static_cast<double>(tp) /
         (2.0 * static_cast<double>(tp) + static_cast<double>(fp) + static_cast<double>(fn));
}

F1Matrix empirical_matrix(const SensorParams& sensor, const EffusivityGrid& grid,
                          const ContactConditions& cond, double sigma, int trials_per_interval,
                          std::uint64_t seed, int threads) {
  grid.validate();
  sensor.validate();
  cond.validate();
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  if (trials_per_interval < 3)
    throw StratificationError("3-fold cross-validation needs at least 3 trials per interval");
  checked_samples(sensor, cond);

  const int n = grid.n_intervals;
  const auto samples = sample_trials(grid, trials_per_interval, seed);
  // Diagonal pairs compare an interval against itself; reusing one sample list
  // for both classes would pair every trace with a same-mean twin, so class b
  // draws from an independent resampling of the same intervals there.
  const auto resampled = sample_trials(
      grid, trials_per_interval,
      derive_seed(seed, static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n), 1));

  SensorParams gen_sensor = sensor;
  gen_sensor.noise_sigma = sigma;  // trace noise follows the sweep's sigma

  F1Matrix m;
  m.grid = grid;
  m.sensor = gen_sensor;
  m.cond = cond;
  m.sigma = sigma;
  m.source = "empirical";
  m.scores.assign(static_cast<std::size_t>(n) * n, 0.0);

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pairs.emplace_back(i, j);

  auto effusivity_at = [&](const std::vector<TrialSample>& set, int interval, int trial) {
    return set[static_cast<std::size_t>(interval) * trials_per_interval + trial].effusivity;
  };
  auto evaluate_pair = [&](int i, int j) {
    const std::uint64_t pair_index =
        static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(j);
    const auto& set_b = i == j ? resampled : samples;
    std::vector<TemperatureTrace> traces_a, traces_b;
    traces_a.reserve(static_cast<std::size_t>(trials_per_interval));
    traces_b.reserve(static_cast<std::size_t>(trials_per_interval));
    for (int k = 0; k < trials_per_interval; ++k) {
      traces_a.push_back(generate_trace(gen_sensor, {effusivity_at(samples, i, k)}, cond,
                                        derive_seed(seed, pair_index, 2 * k)));
      traces_b.push_back(generate_trace(gen_sensor, {effusivity_at(set_b, j, k)}, cond,
                                        derive_seed(seed, pair_index, 2 * k + 1)));
    }
    return train_eval_pair(traces_a, traces_b).f1;
  };

  unsigned requested = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  requested = std::min<unsigned>(requested, static_cast<unsigned>(pairs.size()));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    try {
      for (std::size_t k = begin; k < end; ++k) {
        const auto [i, j] = pairs[k];
        const double score = evaluate_pair(i, j);
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

}  // namespace heatid
