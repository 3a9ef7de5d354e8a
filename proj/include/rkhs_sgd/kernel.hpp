#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace rkhs {

using Point = Eigen::VectorXd;
using OutputVector = Eigen::VectorXd;

enum class KernelFamily { gaussian, laplacian, matern32 };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

// A unit-diagonal, translation-invariant positive-definite kernel on R^d.
//
//   gaussian   exp(-|x - x'|^2 / (2 sigma^2))
//   laplacian  exp(-|x - x'| / sigma)
//   matern32   (1 + a) exp(-a),  a = sqrt(3) |x - x'| / sigma
//
// Every family has k(x, x) = 1, so the sup-norm embedding constant is 1.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double bandwidth = 1.0;
  int dim = 1;

  KernelSpec() = default;
  KernelSpec(KernelFamily family, double bandwidth, int dim);

  bool operator==(const KernelSpec&) const = default;
};

// Euclidean distance with pairwise summation of the squared differences.
// The result is bitwise symmetric in its arguments.
double distance(const Point& x, const Point& x2);

double eval(const KernelSpec& spec, const Point& x, const Point& x2);

struct GramMatrix {
  Eigen::MatrixXd entries;
  std::vector<Point> points;
};

GramMatrix gram(const KernelSpec& spec, const std::vector<Point>& points);

// M in sup_x |f(x)| <= M |f|_H.
double sup_bound(const KernelSpec& spec);

void check_point_dim(const KernelSpec& spec, const Point& x);

}  // namespace rkhs
