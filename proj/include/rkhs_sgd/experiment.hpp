#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "rkhs_sgd/exact_solver.hpp"
#include "rkhs_sgd/sgd_solver.hpp"

namespace rkhs {

struct StudyConfig {
  SgdConfig sgd;
  std::uint64_t trials = 1;
  double tail_fraction = 0.5;
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct RateFit {
  double slope;
  double intercept;
  double ci;  // 95% half-width
  std::size_t points;
};

struct ConvergenceRecord {
  std::vector<std::uint64_t> ks;
  std::vector<double> mean_err_sq;
  std::vector<double> std_error;
  std::optional<RateFit> fit;
  double bound_scale;
  // max over trials and k of |F_k|_H; set only for a finite radius.
  std::optional<double> max_iterate_norm;
};

// Per-trial squared errors |F_k - f*|^2, one row per trial, one column per recorded k.
struct TrialMatrix {
  std::vector<std::uint64_t> ks;
  Eigen::MatrixXd err_sq;
  std::vector<std::optional<double>> max_norm;
};

// Runs trials [first, first + count) on substreams (seed, t). Rows are filled
// by trial index, so the result does not depend on the thread count.
TrialMatrix run_trials(const SgdConfig& cfg, const SgdProblem& problem, std::uint64_t first, std::uint64_t count,
                       unsigned threads);

// Means and standard errors reduced over trials in index order.
void summarize(const TrialMatrix& trials, std::vector<double>& mean, std::vector<double>& std_error);

// OLS of log(mean) on log(k) over the last ceil(tail_fraction * N) points.
RateFit fit_rate(std::span<const std::uint64_t> ks, std::span<const double> means, double tail_fraction);

// bound_term(f*) / lambda^2: the computable k-free factor of the O(1/k) bound.
double bound_report(const KernelExpansion& fstar, const Dataset& data, const MixtureWeights& w,
                    const ProblemConstants& consts);

struct StudyResult {
  OracleSolution oracle;
  ConvergenceRecord record;
};

// Throws ConfigError when the radius is finite and excludes the unconstrained
// minimizer. The slope fit is left empty when the tail has fewer than 10 points.
StudyResult run_study(const StudyConfig& cfg, const Dataset& data, const KernelSpec& spec);

unsigned resolve_threads(unsigned requested);

}  // namespace rkhs
