#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <random>
#include <vector>

#include "rkhs_sgd/function_space.hpp"
#include "rkhs_sgd/io.hpp"
#include "rkhs_sgd/kernel.hpp"
#include "rkhs_sgd/objective.hpp"

namespace rkhs::testing {

inline Point random_point(std::mt19937_64& gen, int d, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Point x(d);
  for (int i = 0; i < d; ++i) x[i] = u(gen);
  return x;
}

inline OutputVector random_output(std::mt19937_64& gen, int m, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  OutputVector y(m);
  for (int i = 0; i < m; ++i) y[i] = z(gen);
  return y;
}

// Expansion with `p` centers drawn from `pool` (when non-empty) or fresh random points.
inline KernelExpansion random_expansion(std::mt19937_64& gen, const KernelSpec& spec, int m, int p,
                                        const std::vector<Point>& pool = {}) {
  if (p == 0) return KernelExpansion(spec, m);
  std::vector<Point> centers;
  Eigen::MatrixXd coeffs(p, m);
  std::uniform_int_distribution<std::size_t> pick(0, pool.empty() ? 0 : pool.size() - 1);
  for (int j = 0; j < p; ++j) {
    centers.push_back(pool.empty() ? random_point(gen, spec.dim) : pool[pick(gen)]);
    coeffs.row(j) = random_output(gen, m).transpose();
  }
  return KernelExpansion(spec, std::move(centers), std::move(coeffs));
}

inline Dataset random_dataset(std::mt19937_64& gen, std::size_t n, int d, int m) {
  std::vector<Point> xs;
  std::vector<OutputVector> ys;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(random_point(gen, d));
    ys.push_back(random_output(gen, m));
  }
  return Dataset(std::move(xs), std::move(ys));
}

inline KernelSpec spec_of(KernelFamily family, int d, double bandwidth = 1.0) { return KernelSpec(family, bandwidth, d); }

constexpr KernelFamily kFamilies[] = {KernelFamily::gaussian, KernelFamily::laplacian, KernelFamily::matern32};

// Reference instance: n = 20, d = 2, m = 1 from the default generator settings.
inline Dataset reference_dataset() { return io::generate_dataset(20, 2, 1, 0.1, 1); }

inline Point pt(std::initializer_list<double> v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

}  // namespace rkhs::testing
