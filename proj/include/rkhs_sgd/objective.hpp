#pragma once

#include <cstddef>
#include <vector>

#include "rkhs_sgd/function_space.hpp"
#include "rkhs_sgd/kernel.hpp"

namespace rkhs {

class Dataset {
 public:
  Dataset(std::vector<Point> points, std::vector<OutputVector> labels);

  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] int dim() const { return static_cast<int>(points_.front().size()); }
  [[nodiscard]] int out_dim() const { return static_cast<int>(labels_.front().size()); }
  [[nodiscard]] const std::vector<Point>& points() const { return points_; }
  [[nodiscard]] const std::vector<OutputVector>& labels() const { return labels_; }
  // 1-based, matching the component index I in 1..n.
  [[nodiscard]] const Point& x(std::size_t i) const { return points_[i - 1]; }
  [[nodiscard]] const OutputVector& y(std::size_t i) const { return labels_[i - 1]; }
  [[nodiscard]] double max_label_norm() const;

 private:
  std::vector<Point> points_;
  std::vector<OutputVector> labels_;
};

// Law of the component index I: P(I = 0) = q, P(I = i) = (1 - q) / n.
struct MixtureWeights {
  double q;
  std::size_t n;

  MixtureWeights(double q, std::size_t n);
  [[nodiscard]] double prob(std::size_t i) const { return i == 0 ? q : (1.0 - q) / static_cast<double>(n); }
};

struct ProblemConstants {
  double lambda;               // strong monotonicity of Du, equals q
  double lambda_sq_lipschitz;  // mean-square Lipschitz constant of DU, q + (1 - q) M^4
  double embedding;            // M
};

void check_consistent(const KernelExpansion& f, const Dataset& data);

// u_0(f) = |f|^2 / 2, u_i(f) = |f(x_i) - y_i|^2 / 2.
double loss_component(std::size_t i, const KernelExpansion& f, const Dataset& data);

// u(f) = E[u_I(f)] = q/2 |f|^2 + (1 - q)/(2n) sum_i |f(x_i) - y_i|^2.
double loss_total(const KernelExpansion& f, const Dataset& data, const MixtureWeights& w);

// Riesz image of Du_i(f): f for i = 0, Phi(x_i, f(x_i) - y_i) otherwise.
KernelExpansion riesz_grad_component(std::size_t i, const KernelExpansion& f, const Dataset& data);

// Riesz image of Du(f) = q f + (1 - q)/n sum_i Phi(x_i, f(x_i) - y_i).
KernelExpansion riesz_grad_full(const KernelExpansion& f, const Dataset& data, const MixtureWeights& w);

ProblemConstants constants(const MixtureWeights& w, const KernelSpec& spec);

// E[|Du_I(f*)|^2] = q |f*|^2 + (1 - q)/n sum_i |f*(x_i) - y_i|^2 k(x_i, x_i).
double bound_term(const KernelExpansion& fstar, const Dataset& data, const MixtureWeights& w);

}  // namespace rkhs
