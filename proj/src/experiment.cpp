#include "rkhs_sgd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "rkhs_sgd/errors.hpp"

namespace rkhs {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

TrialMatrix run_trials(const SgdConfig& cfg, const SgdProblem& problem, std::uint64_t first, std::uint64_t count,
                       unsigned threads) {
  if (!problem.oracle()) throw InputError("run_trials requires an oracle");
  TrialMatrix out{recorded_ks(cfg.steps, cfg.record_every), {}, std::vector<std::optional<double>>(count)};
  out.err_sq.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(out.ks.size()));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint64_t t = next++; t < count; t = next++) {
      try {
        const Trajectory traj = run(cfg, problem, first + t);
        for (std::size_t j = 0; j < traj.values.size(); ++j) {
          out.err_sq(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = traj.values[j];
        }
        out.max_norm[t] = traj.max_norm;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(count, 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

void summarize(const TrialMatrix& trials, std::vector<double>& mean, std::vector<double>& std_error) {
  const Eigen::Index rows = trials.err_sq.rows();
  const Eigen::Index cols = trials.err_sq.cols();
  mean.assign(static_cast<std::size_t>(cols), 0.0);
  std_error.assign(static_cast<std::size_t>(cols), 0.0);
  if (rows == 0) return;
  for (Eigen::Index j = 0; j < cols; ++j) {
    double sum = 0.0;
    for (Eigen::Index t = 0; t < rows; ++t) sum += trials.err_sq(t, j);
    const double mu = sum / static_cast<double>(rows);
    double ss = 0.0;
    for (Eigen::Index t = 0; t < rows; ++t) {
      const double dev = trials.err_sq(t, j) - mu;
      ss += dev * dev;
    }
    mean[static_cast<std::size_t>(j)] = mu;
    if (rows > 1) {
      std_error[static_cast<std::size_t>(j)] =
          std::sqrt(ss / static_cast<double>(rows - 1)) / std::sqrt(static_cast<double>(rows));
    }
  }
}

RateFit fit_rate(std::span<const std::uint64_t> ks, std::span<const double> means, double tail_fraction) {
  if (ks.size() != means.size()) throw InputError("fit_rate: ks and means differ in length");
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) throw InputError("tail_fraction must lie in (0, 1)");
  const auto total = ks.size();
  const auto tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total)));
  if (tail < 10) {
    throw InputError("fit_rate: tail has " + std::to_string(tail) + " points, at least 10 are required");
  }
  const std::size_t start = total - tail;
  std::vector<double> lx, ly;
  lx.reserve(tail);
  ly.reserve(tail);
  for (std::size_t i = start; i < total; ++i) {
    if (!(means[i] > 0.0)) {
      std::ostringstream msg;
      msg << "fit_rate: nonpositive mean " << means[i] << " at k = " << ks[i] << " (divergence or exact convergence)";
      throw NumericalError(msg.str());
    }
    lx.push_back(std::log(static_cast<double>(ks[i])));
    ly.push_back(std::log(means[i]));
  }
  const auto n = static_cast<double>(tail);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < tail; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < tail; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("fit_rate: tail ks are all equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < tail; ++i) {
    const double res = ly[i] - (intercept + slope * lx[i]);
    ssr += res * res;
  }
  const double se = std::sqrt(ssr / (n - 2.0) / sxx);
  const boost::math::students_t t_dist(n - 2.0);
  const double ci = boost::math::quantile(t_dist, 0.975) * se;
  return {slope, intercept, ci, tail};
}

double bound_report(const KernelExpansion& fstar, const Dataset& data, const MixtureWeights& w,
                    const ProblemConstants& consts) {
  return bound_term(fstar, data, w) / (consts.lambda * consts.lambda);
}

StudyResult run_study(const StudyConfig& cfg, const Dataset& data, const KernelSpec& spec) {
  if (cfg.trials < 1) throw InputError("trials must be >= 1");
  if (!(cfg.tail_fraction > 0.0 && cfg.tail_fraction < 1.0)) throw InputError("tail_fraction must lie in (0, 1)");
  validate(cfg.sgd, data);

  OracleSolution oracle = solve(spec, data, cfg.sgd.weights, cfg.sgd.radius);
  if (!oracle.constrained_ok) {
    std::ostringstream msg;
    msg << "radius r = " << cfg.sgd.radius.value() << " excludes the unconstrained minimizer (|f*|_H = "
        << norm(oracle.fstar) << "); use a radius of at least |f*|_H or radius = inf";
    throw ConfigError(msg.str());
  }

  const SgdProblem problem(data, spec, oracle.fstar);
  const TrialMatrix trials = run_trials(cfg.sgd, problem, 0, cfg.trials, cfg.threads);

  ConvergenceRecord record;
  record.ks = trials.ks;
  summarize(trials, record.mean_err_sq, record.std_error);
  const auto tail = static_cast<std::size_t>(std::ceil(cfg.tail_fraction * static_cast<double>(record.ks.size())));
  if (tail >= 10) record.fit = fit_rate(record.ks, record.mean_err_sq, cfg.tail_fraction);
  for (const auto& m : trials.max_norm) {
    if (m) record.max_iterate_norm = std::max(record.max_iterate_norm.value_or(0.0), *m);
  }
  record.bound_scale = bound_report(oracle.fstar, data, cfg.sgd.weights, constants(cfg.sgd.weights, spec));
  return {std::move(oracle), std::move(record)};
}

}  // namespace rkhs
