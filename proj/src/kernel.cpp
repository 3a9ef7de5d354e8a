#include "rkhs_sgd/kernel.hpp"

#include <cmath>
#include <string>

#include "rkhs_sgd/errors.hpp"

namespace rkhs {

namespace {

double pairwise_sum_sq(const double* a, const double* b, Eigen::Index n) {
  if (n <= 4) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double diff = a[i] - b[i];
      acc += diff * diff;
    }
    return acc;
  }
  const Eigen::Index half = n / 2;
  return pairwise_sum_sq(a, b, half) + pairwise_sum_sq(a + half, b + half, n - half);
}

}  // namespace

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian:
      return "gaussian";
    case KernelFamily::laplacian:
      return "laplacian";
    case KernelFamily::matern32:
      return "matern32";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "laplacian") return KernelFamily::laplacian;
  if (name == "matern32") return KernelFamily::matern32;
  throw InputError("unknown kernel family '" + std::string(name) + "' (expected gaussian, laplacian or matern32)");
}

KernelSpec::KernelSpec(KernelFamily family_, double bandwidth_, int dim_)
    : family(family_), bandwidth(bandwidth_), dim(dim_) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InputError("kernel bandwidth must be a positive finite number, got " + std::to_string(bandwidth));
  }
  if (dim < 1) throw InputError("kernel input dimension must be >= 1, got " + std::to_string(dim));
}

void check_point_dim(const KernelSpec& spec, const Point& x) {
  if (x.size() != spec.dim) {
    throw InputError("point has dimension " + std::to_string(x.size()) + ", kernel expects " +
                     std::to_string(spec.dim));
  }
}

double distance(const Point& x, const Point& x2) {
  return std::sqrt(pairwise_sum_sq(x.data(), x2.data(), x.size()));
}

double eval(const KernelSpec& spec, const Point& x, const Point& x2) {
  check_point_dim(spec, x);
  check_point_dim(spec, x2);
  const double sigma = spec.bandwidth;
  switch (spec.family) {
    case KernelFamily::gaussian: {
      const double sq = pairwise_sum_sq(x.data(), x2.data(), x.size());
      return std::exp(-sq / (2.0 * sigma * sigma));
    }
    case KernelFamily::laplacian:
      return std::exp(-distance(x, x2) / sigma);
    case KernelFamily::matern32: {
      const double a = std::sqrt(3.0) * distance(x, x2) / sigma;
      return (1.0 + a) * std::exp(-a);
    }
  }
  return 0.0;
}

GramMatrix gram(const KernelSpec& spec, const std::vector<Point>& points) {
  if (points.empty()) throw InputError("gram: empty point list");
  for (const auto& p : points) check_point_dim(spec, p);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = eval(spec, points[j], points[j]);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      k(i, j) = eval(spec, points[i], points[j]);
      k(j, i) = k(i, j);
    }
  }
  return {std::move(k), points};
}

double sup_bound(const KernelSpec& /*spec*/) { return 1.0; }

}  // namespace rkhs
