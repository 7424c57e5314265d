#pragma once

// Data-driven cross-check of the closed-form prediction: slope-augmented
// features, a deterministic linear max-margin classifier evaluated by
// stratified k-fold cross-validation, a Monte-Carlo likelihood-ratio oracle,
// and the empirical pairwise F1 matrix.

#include <cstdint>
#include <vector>

#include "heatid/grid.hpp"
#include "heatid/model.hpp"
#include "heatid/thermal.hpp"

namespace heatid {

struct FeatureVector {
  std::vector<double> values;  // [raw temps | local slopes], length 2 * trace length
  int label = 0;               // -1 / +1 once assigned by a trainer
};

struct CVResult {
  double f1 = 0.0;  // mean of per_fold
  int folds = 0;
  std::vector<double> per_fold;
};

// Raw temperatures concatenated with least-squares local slopes (degC/s) over
// a centered window; windows truncate at the trace edges.
FeatureVector extract_features(const TemperatureTrace& trace, int slope_window = 11);

// Stratified round-robin k-fold cross-validation of a linear classifier
// trained by full-batch subgradient descent on hinge loss + L2 (regularization
// weight 1/(n_train * c_reg), 500 epochs, learning rate 1/(weight * epoch),
// zero initialization, unregularized intercept). Features are standardized per
// fold with train-set statistics. Returns F1 with class b as positive.
// Deterministic.
CVResult train_eval_pair(const std::vector<TemperatureTrace>& traces_a,
                         const std::vector<TemperatureTrace>& traces_b, int folds = 3,
                         double c_reg = 1.0);

// Brute-force ground truth for f1_pair: per replicate, one trace from each
// class is drawn and both are scored by their multivariate-normal likelihood
// under the class-2 mean curve (spherical covariance, so squared Euclidean
// distance). The replicate misassigns — one false positive plus one false
// negative — iff the class-1 trace is the likelier class-2 candidate; that
// distance comparison is exactly the noncentral-F event the closed form
// evaluates. Accumulates TP/FP/FN over replicates and returns F1.
double mc_oracle_f1(const SensorParams& sensor, double e1, double e2,
                    const ContactConditions& cond, double sigma, long n_pairs,
                    std::uint64_t seed);

// Cross-validated classifier F1 over all interval pairs; class traces are
// generated at effusivities drawn by sample_trials and noise seeds derived
// from (seed, pair index, trial index). Symmetric; evaluated once per pair.
// threads = 0 picks hardware concurrency; results are thread-count invariant.
F1Matrix empirical_matrix(const SensorParams& sensor, const EffusivityGrid& grid,
                          const ContactConditions& cond, double sigma, int trials_per_interval,
                          std::uint64_t seed, int threads = 0);

}  // namespace heatid
