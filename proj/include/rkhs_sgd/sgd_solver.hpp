#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "rkhs_sgd/function_space.hpp"
#include "rkhs_sgd/objective.hpp"
#include "rkhs_sgd/rng.hpp"

namespace rkhs {

// Harmonic step sizes eta_k = (s / lambda) / (b + k) with
// b = 2 rho (Lambda / lambda)^2 s. The offset b makes
// 1 - 2 lambda eta_k + 2 Lambda^2 rho eta_k^2 <= 1 - lambda eta_k for every k >= 1.
struct StepSchedule {
  double s;
  double lambda;
  double lambda_sq_lipschitz;
  double rho;
  double b;

  [[nodiscard]] double eta(std::uint64_t k) const { return (s / lambda) / (b + static_cast<double>(k)); }
};

StepSchedule make_schedule(const ProblemConstants& consts, double rho, double s);

enum class OperatorKind { identity, two_point_scalar };

// Random operator L_k = c_k I with E[c] = 1. For the two-point law
// c = c_hi with probability p_hi and c_lo otherwise; rho(E[L*L]) = E[c^2].
class OperatorMode {
 public:
  static OperatorMode identity();
  static OperatorMode two_point(double c_lo, double c_hi, double p_hi);

  [[nodiscard]] OperatorKind kind() const { return kind_; }
  [[nodiscard]] double c_lo() const { return c_lo_; }
  [[nodiscard]] double c_hi() const { return c_hi_; }
  [[nodiscard]] double p_hi() const { return p_hi_; }
  [[nodiscard]] double mean() const { return p_hi_ * c_hi_ + (1.0 - p_hi_) * c_lo_; }
  [[nodiscard]] double rho() const { return p_hi_ * c_hi_ * c_hi_ + (1.0 - p_hi_) * c_lo_ * c_lo_; }

 private:
  OperatorMode(OperatorKind kind, double c_lo, double c_hi, double p_hi)
      : kind_(kind), c_lo_(c_lo), c_hi_(c_hi), p_hi_(p_hi) {}

  OperatorKind kind_;
  double c_lo_;
  double c_hi_;
  double p_hi_;
};

// Draws I in {0, ..., n} with P(I = 0) = q, P(I = i) = (1 - q) / n.
std::size_t sample_index(PhiloxStream& rng, const MixtureWeights& w);

// Draws c_k; the identity mode returns 1 without consuming randomness.
double sample_operator(PhiloxStream& rng, const OperatorMode& mode);

// One projected step: Proj_r(F - eta c R_H Du_I(F)).
KernelExpansion step(const KernelExpansion& F, std::size_t index, double eta, double c, const Dataset& data,
                     const Radius& r);

struct SgdConfig {
  MixtureWeights weights;
  Radius radius = Radius::infinite();
  double s = 2.0;
  std::uint64_t steps = 1;  // K: iterates F_1 .. F_K are produced
  std::uint64_t seed = 0;
  OperatorMode op = OperatorMode::identity();
  std::uint64_t record_every = 1;
  bool keep_snapshots = false;
  bool log_draws = false;
};

void validate(const SgdConfig& cfg, const Dataset& data);

// Recorded indices: k = 1 and every multiple of record_every up to K.
std::vector<std::uint64_t> recorded_ks(std::uint64_t steps, std::uint64_t record_every);

// Read-only data shared by all trials: dataset, Gram matrix and the oracle
// (when given) expressed as a coefficient table over dataset rows.
class SgdProblem {
 public:
  SgdProblem(Dataset data, const KernelSpec& spec, std::optional<KernelExpansion> oracle = std::nullopt);

  [[nodiscard]] const Dataset& data() const { return data_; }
  [[nodiscard]] const KernelSpec& spec() const { return spec_; }
  [[nodiscard]] const Eigen::MatrixXd& gram() const { return gram_; }
  [[nodiscard]] const std::optional<KernelExpansion>& oracle() const { return oracle_; }
  [[nodiscard]] const std::optional<Eigen::MatrixXd>& oracle_table() const { return oracle_table_; }

  // Expansion with centers at the dataset points carrying the given table rows.
  [[nodiscard]] KernelExpansion to_expansion(const Eigen::MatrixXd& table) const;
  // trace(A^T K A) = |sum_j A_j k(x_j, .)|^2_H, clamped like norm_sq.
  [[nodiscard]] double table_norm_sq(const Eigen::MatrixXd& table) const;

 private:
  Dataset data_;
  KernelSpec spec_;
  Eigen::MatrixXd gram_;
  std::optional<KernelExpansion> oracle_;
  std::optional<Eigen::MatrixXd> oracle_table_;
};

struct Trajectory {
  std::vector<std::uint64_t> ks;
  // |F_k - f*|^2 when an oracle is supplied, |F_k|^2 otherwise.
  std::vector<double> values;
  bool has_oracle = false;
  std::vector<KernelExpansion> snapshots;
  std::vector<std::size_t> index_draws;
  KernelExpansion final_iterate;
  // max_k |F_k|_H over every iterate, tracked only for finite radius.
  std::optional<double> max_norm;
  StepSchedule schedule;
};

// F_1 = 0, F_{k+1} = step(F_k, I_k, eta_k, c_k). `stream` selects the
// Philox substream (seed, stream) so that independent trials never share draws.
Trajectory run(const SgdConfig& cfg, const SgdProblem& problem, std::uint64_t stream = 0);

Trajectory run(const SgdConfig& cfg, const Dataset& data, const KernelSpec& spec,
               const std::optional<KernelExpansion>& oracle = std::nullopt);

}  // namespace rkhs
