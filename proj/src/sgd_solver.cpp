#include "rkhs_sgd/sgd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rkhs_sgd/errors.hpp"

namespace rkhs {

StepSchedule make_schedule(const ProblemConstants& consts, double rho, double s) {
  if (!(s > 1.0)) throw InputError("step-size parameter s must exceed 1, got " + std::to_string(s));
  if (!(rho >= 1.0)) throw InputError("operator second moment rho must be >= 1, got " + std::to_string(rho));
  if (!(consts.lambda > 0.0) || consts.lambda * consts.lambda > consts.lambda_sq_lipschitz) {
    throw InputError("problem constants must satisfy 0 < lambda <= Lambda");
  }
  const double ratio = consts.lambda_sq_lipschitz / (consts.lambda * consts.lambda);
  return {s, consts.lambda, consts.lambda_sq_lipschitz, rho, 2.0 * rho * ratio * s};
}

OperatorMode OperatorMode::identity() { return {OperatorKind::identity, 1.0, 1.0, 1.0}; }

OperatorMode OperatorMode::two_point(double c_lo, double c_hi, double p_hi) {
  if (!(c_lo > 0.0) || !(c_hi > 0.0)) throw InputError("operator scalars c_lo and c_hi must be positive");
  if (!(p_hi >= 0.0 && p_hi <= 1.0)) throw InputError("operator probability p_hi must lie in [0, 1]");
  OperatorMode mode{OperatorKind::two_point_scalar, c_lo, c_hi, p_hi};
  if (std::abs(mode.mean() - 1.0) > 1e-12) {
    throw InputError("two-point operator must have mean 1, got p_hi*c_hi + (1-p_hi)*c_lo = " +
                     std::to_string(mode.mean()));
  }
  return mode;
}

std::size_t sample_index(PhiloxStream& rng, const MixtureWeights& w) {
  const double u = rng.uniform();
  if (u < w.q) return 0;
  const auto n = static_cast<double>(w.n);
  const auto j = static_cast<std::size_t>((u - w.q) / (1.0 - w.q) * n);
  return std::min(j, w.n - 1) + 1;
}

double sample_operator(PhiloxStream& rng, const OperatorMode& mode) {
  if (mode.kind() == OperatorKind::identity) return 1.0;
  return rng.uniform() < mode.p_hi() ? mode.c_hi() : mode.c_lo();
}

KernelExpansion step(const KernelExpansion& F, std::size_t index, double eta, double c, const Dataset& data,
                     const Radius& r) {
  if (!(eta > 0.0)) throw InputError("step size must be positive");
  if (!(c > 0.0)) throw InputError("operator scalar must be positive");
  const KernelExpansion grad = riesz_grad_component(index, F, data);
  return project_ball(combine(1.0, F, -eta * c, grad), r);
}

void validate(const SgdConfig& cfg, const Dataset& data) {
  if (cfg.weights.n != data.size()) {
    throw InputError("mixture weights are for n = " + std::to_string(cfg.weights.n) + " but the dataset has " +
                     std::to_string(data.size()) + " points");
  }
  if (!(cfg.s > 1.0)) throw InputError("s must exceed 1");
  if (cfg.steps < 1) throw InputError("steps must be >= 1");
  if (cfg.record_every < 1) throw InputError("record_every must be >= 1");
}

std::vector<std::uint64_t> recorded_ks(std::uint64_t steps, std::uint64_t record_every) {
  std::vector<std::uint64_t> ks{1};
  for (std::uint64_t k = record_every; k <= steps; k += record_every) {
    if (k != 1) ks.push_back(k);
  }
  return ks;
}

SgdProblem::SgdProblem(Dataset data, const KernelSpec& spec, std::optional<KernelExpansion> oracle)
    : data_(std::move(data)), spec_(spec), oracle_(std::move(oracle)) {
  if (spec_.dim != data_.dim()) throw InputError("kernel dimension does not match dataset dimension");
  gram_ = rkhs::gram(spec_, data_.points()).entries;
  if (!oracle_) return;
  check_consistent(*oracle_, data_);
  std::map<Point, Eigen::Index, PointLess> row_of;
  for (std::size_t i = 0; i < data_.size(); ++i) row_of.try_emplace(data_.points()[i], static_cast<Eigen::Index>(i));
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data_.size()), data_.out_dim());
  for (std::size_t j = 0; j < oracle_->size(); ++j) {
    auto it = row_of.find(oracle_->centers()[j]);
    if (it == row_of.end()) return;  // oracle has off-data centers; distances use the expansion route
    table.row(it->second) += oracle_->coeffs().row(static_cast<Eigen::Index>(j));
  }
  oracle_table_ = std::move(table);
}

KernelExpansion SgdProblem::to_expansion(const Eigen::MatrixXd& table) const {
  std::vector<Point> centers;
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    if ((table.row(i).array() != 0.0).any()) {
      centers.push_back(data_.points()[static_cast<std::size_t>(i)]);
      rows.push_back(i);
    }
  }
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(rows.size()), table.cols());
  for (std::size_t j = 0; j < rows.size(); ++j) coeffs.row(static_cast<Eigen::Index>(j)) = table.row(rows[j]);
  return KernelExpansion(spec_, std::move(centers), std::move(coeffs));
}

double SgdProblem::table_norm_sq(const Eigen::MatrixXd& table) const {
  const double value = (table.transpose() * gram_ * table).trace();
  if (value >= 0.0) return value;
  const double scale = table.squaredNorm();
  if (value < -1e-10 * scale) {
    throw NumericalError("table_norm_sq: negative quadratic form " + std::to_string(value));
  }
  return 0.0;
}

Trajectory run(const SgdConfig& cfg, const SgdProblem& problem, std::uint64_t stream) {
  const Dataset& data = problem.data();
  validate(cfg, data);
  const auto consts = constants(cfg.weights, problem.spec());
  const StepSchedule schedule = make_schedule(consts, cfg.op.rho(), cfg.s);
  const auto& K = problem.gram();
  const bool finite_r = !cfg.radius.is_infinite();
  const double r = cfg.radius.value();

  Trajectory traj{.ks = recorded_ks(cfg.steps, cfg.record_every),
                  .values = {},
                  .has_oracle = problem.oracle().has_value(),
                  .snapshots = {},
                  .index_draws = {},
                  .final_iterate = KernelExpansion(problem.spec(), data.out_dim()),
                  .max_norm = std::nullopt,
                  .schedule = schedule};
  traj.values.reserve(traj.ks.size());
  if (cfg.log_draws) traj.index_draws.reserve(cfg.steps - 1);

  // F_k = sum_j alpha.row(j) k(x_j, .); F_1 = 0.
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.size()), data.out_dim());
  double norm_k = 0.0;
  if (finite_r) traj.max_norm = 0.0;

  auto record = [&] {
    double value;
    if (!problem.oracle()) {
      value = problem.table_norm_sq(alpha);
    } else if (problem.oracle_table()) {
      value = problem.table_norm_sq(alpha - *problem.oracle_table());
    } else {
      value = norm_sq(combine(1.0, problem.to_expansion(alpha), -1.0, *problem.oracle()));
    }
    traj.values.push_back(value);
    if (cfg.keep_snapshots) traj.snapshots.push_back(problem.to_expansion(alpha));
  };

  PhiloxStream rng(cfg.seed, stream);
  std::size_t next_record = 0;
  for (std::uint64_t k = 1;; ++k) {
    if (next_record < traj.ks.size() && traj.ks[next_record] == k) {
      record();
      ++next_record;
    }
    if (k == cfg.steps) break;

    const std::size_t index = sample_index(rng, cfg.weights);
    const double c = sample_operator(rng, cfg.op);
    const double eta = schedule.eta(k);
    if (cfg.log_draws) traj.index_draws.push_back(index);

    if (index == 0) {
      alpha *= 1.0 - eta * c;
    } else {
      const auto row = static_cast<Eigen::Index>(index - 1);
      const Eigen::RowVectorXd value = K.row(row) * alpha;
      alpha.row(row) += (eta * c) * (data.y(index).transpose() - value);
    }
    if (finite_r) {
      norm_k = std::sqrt(problem.table_norm_sq(alpha));
      if (norm_k > r) {
        alpha *= r / norm_k;
        norm_k = std::sqrt(problem.table_norm_sq(alpha));
      }
      traj.max_norm = std::max(*traj.max_norm, norm_k);
    }
  }
  traj.final_iterate = problem.to_expansion(alpha);
  return traj;
}

Trajectory run(const SgdConfig& cfg, const Dataset& data, const KernelSpec& spec,
               const std::optional<KernelExpansion>& oracle) {
  return run(cfg, SgdProblem(data, spec, oracle), 0);
}

}  // namespace rkhs
