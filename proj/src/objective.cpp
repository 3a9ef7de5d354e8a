#include "rkhs_sgd/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rkhs_sgd/errors.hpp"

namespace rkhs {

Dataset::Dataset(std::vector<Point> points, std::vector<OutputVector> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.empty()) throw InputError("dataset must contain at least one point");
  if (points_.size() != labels_.size()) {
    throw InputError("dataset has " + std::to_string(points_.size()) + " points but " +
                     std::to_string(labels_.size()) + " labels");
  }
  const auto d = points_.front().size();
  const auto m = labels_.front().size();
  if (d < 1 || m < 1) throw InputError("dataset dimensions must be >= 1");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != d || labels_[i].size() != m) {
      throw InputError("dataset row " + std::to_string(i + 1) + " has inconsistent dimensions");
    }
  }
}

double Dataset::max_label_norm() const {
  double out = 0.0;
  for (const auto& y : labels_) out = std::max(out, y.norm());
  return out;
}

MixtureWeights::MixtureWeights(double q_, std::size_t n_) : q(q_), n(n_) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("q must lie in (0, 1), got " + std::to_string(q));
  if (n < 1) throw InputError("mixture needs n >= 1 data components");
}

void check_consistent(const KernelExpansion& f, const Dataset& data) {
  if (f.spec().dim != data.dim()) {
    throw InputError("kernel input dimension " + std::to_string(f.spec().dim) + " does not match dataset dimension " +
                     std::to_string(data.dim()));
  }
  if (f.out_dim() != data.out_dim()) {
    throw InputError("expansion output dimension " + std::to_string(f.out_dim()) +
                     " does not match label dimension " + std::to_string(data.out_dim()));
  }
}

namespace {

void check_index(std::size_t i, const Dataset& data) {
  if (i > data.size()) {
    throw InputError("component index " + std::to_string(i) + " out of range 0.." + std::to_string(data.size()));
  }
}

void check_weights(const MixtureWeights& w, const Dataset& data) {
  if (w.n != data.size()) {
    throw InputError("mixture weights are for n = " + std::to_string(w.n) + " but the dataset has " +
                     std::to_string(data.size()) + " points");
  }
}

}  // namespace

double loss_component(std::size_t i, const KernelExpansion& f, const Dataset& data) {
  check_index(i, data);
  check_consistent(f, data);
  if (i == 0) return 0.5 * norm_sq(f);
  return 0.5 * (evaluate(f, data.x(i)) - data.y(i)).squaredNorm();
}

double loss_total(const KernelExpansion& f, const Dataset& data, const MixtureWeights& w) {
  check_consistent(f, data);
  check_weights(w, data);
  double fit = 0.0;
  for (std::size_t i = 1; i <= data.size(); ++i) fit += loss_component(i, f, data);
  return w.q * loss_component(0, f, data) + (1.0 - w.q) / static_cast<double>(data.size()) * fit;
}

KernelExpansion riesz_grad_component(std::size_t i, const KernelExpansion& f, const Dataset& data) {
  check_index(i, data);
  check_consistent(f, data);
  if (i == 0) return f;
  return representer(f.spec(), data.x(i), evaluate(f, data.x(i)) - data.y(i));
}

KernelExpansion riesz_grad_full(const KernelExpansion& f, const Dataset& data, const MixtureWeights& w) {
  check_consistent(f, data);
  check_weights(w, data);
  const auto n = data.size();
  std::vector<Point> centers(data.points());
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(n), f.out_dim());
  const double weight = (1.0 - w.q) / static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    coeffs.row(static_cast<Eigen::Index>(i - 1)) = weight * (evaluate(f, data.x(i)) - data.y(i)).transpose();
  }
  return combine(w.q, f, 1.0, KernelExpansion(f.spec(), std::move(centers), std::move(coeffs)));
}

ProblemConstants constants(const MixtureWeights& w, const KernelSpec& spec) {
  const double m = sup_bound(spec);
  return {w.q, w.q + (1.0 - w.q) * m * m * m * m, m};
}

double bound_term(const KernelExpansion& fstar, const Dataset& data, const MixtureWeights& w) {
  check_consistent(fstar, data);
  check_weights(w, data);
  double fit = 0.0;
  for (std::size_t i = 1; i <= data.size(); ++i) {
    const auto& x = data.x(i);
    fit += (evaluate(fstar, x) - data.y(i)).squaredNorm() * eval(fstar.spec(), x, x);
  }
  return w.q * norm_sq(fstar) + (1.0 - w.q) / static_cast<double>(data.size()) * fit;
}

}  // namespace rkhs
