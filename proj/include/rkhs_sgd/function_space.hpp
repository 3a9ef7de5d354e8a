#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rkhs_sgd/kernel.hpp"

namespace rkhs {

// An element of H written as a finite sum of representers,
//
//   f(.) = sum_j coeffs.row(j) * k(centers[j], .),
//
// with vector-valued coefficients in R^m. Centers that compare equal
// coordinate by coordinate are merged on construction, so a center appears
// at most once. The zero function has no centers.
class KernelExpansion {
 public:
  KernelExpansion(const KernelSpec& spec, int out_dim);
  // coeffs is p x m, one row per center.
  KernelExpansion(const KernelSpec& spec, std::vector<Point> centers, Eigen::MatrixXd coeffs);

  [[nodiscard]] const KernelSpec& spec() const { return spec_; }
  [[nodiscard]] int out_dim() const { return out_dim_; }
  [[nodiscard]] std::size_t size() const { return centers_.size(); }
  [[nodiscard]] bool empty() const { return centers_.empty(); }
  [[nodiscard]] const std::vector<Point>& centers() const { return centers_; }
  [[nodiscard]] const Eigen::MatrixXd& coeffs() const { return coeffs_; }

 private:
  KernelSpec spec_;
  int out_dim_;
  std::vector<Point> centers_;
  Eigen::MatrixXd coeffs_;
};

// Closed-ball radius in (0, +inf]. Infinity disables projection.
class Radius {
 public:
  explicit Radius(double value);
  static Radius infinite();

  [[nodiscard]] bool is_infinite() const;
  [[nodiscard]] double value() const { return value_; }

 private:
  double value_;
};

// Strict weak order on points by coordinates; used for exact-equality coalescing.
struct PointLess {
  bool operator()(const Point& a, const Point& b) const;
};

OutputVector evaluate(const KernelExpansion& f, const Point& x);

// Phi(x, y) = y k(x, .), the Riesz image of phi -> (y, phi(x)).
KernelExpansion representer(const KernelSpec& spec, const Point& x, const OutputVector& y);

double inner(const KernelExpansion& f, const KernelExpansion& g);

// inner(f, f) with round-off negatives clamped to zero. Throws NumericalError
// when the raw value is below -1e-10 times the diagonal scale.
double norm_sq(const KernelExpansion& f);
double norm(const KernelExpansion& f);

// a f + b g, coalescing coinciding centers and dropping rows that cancel to exactly zero.
KernelExpansion combine(double a, const KernelExpansion& f, double b, const KernelExpansion& g);
KernelExpansion scale(double a, const KernelExpansion& f);

// Metric projection onto the closed ball of radius r: f / max(1, |f| / r).
KernelExpansion project_ball(const KernelExpansion& f, const Radius& r);

void check_compatible(const KernelExpansion& f, const KernelExpansion& g);

}  // namespace rkhs
