#pragma once

#include <Eigen/Dense>

#include "rkhs_sgd/function_space.hpp"
#include "rkhs_sgd/objective.hpp"

namespace rkhs {

struct OracleSolution {
  KernelExpansion fstar;
  // Coefficient table over dataset rows (n x m), before coalescing duplicates.
  Eigen::MatrixXd alpha;
  // |R_H Du(f*)|_H
  double residual_norm;
  // |f*|_H <= r, i.e. the unconstrained minimizer is also the ball-constrained one.
  bool constrained_ok;
};

// Exact unconstrained minimizer of u. Setting R_H Du(f) = 0 for
// f = sum_j alpha_j k(x_j, .) gives K (q alpha + (1-q)/n (K alpha - Y)) = 0,
// which is solved as (K + q n / (1 - q) I) alpha = Y with one Cholesky factor
// shared by all m output columns.
OracleSolution solve(const KernelSpec& spec, const Dataset& data, const MixtureWeights& w,
                     const Radius& r = Radius::infinite());

// Tolerance on residual_norm accepted as first-order optimality.
double residual_tolerance(const Dataset& data);

// |f - g|^2_H
double distance_sq(const KernelExpansion& f, const KernelExpansion& g);

}  // namespace rkhs
