#include "rkhs_sgd/function_space.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "rkhs_sgd/errors.hpp"

namespace rkhs {

namespace {

// Merges equal centers; rows of `coeffs` at duplicate centers are summed into
// the first occurrence. When `drop_zero` is set, rows that end up exactly zero
// are removed.
void coalesce(std::vector<Point>& centers, Eigen::MatrixXd& coeffs, bool drop_zero) {
  std::map<Point, Eigen::Index, PointLess> seen;
  std::vector<Point> out_centers;
  out_centers.reserve(centers.size());
  Eigen::MatrixXd out(coeffs.rows(), coeffs.cols());
  Eigen::Index p = 0;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(centers.size()); ++j) {
    auto [it, inserted] = seen.try_emplace(centers[j], p);
    if (inserted) {
      out_centers.push_back(std::move(centers[j]));
      out.row(p) = coeffs.row(j);
      ++p;
    } else {
      out.row(it->second) += coeffs.row(j);
    }
  }
  if (drop_zero) {
    Eigen::Index kept = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if ((out.row(j).array() == 0.0).all()) continue;
      if (kept != j) {
        out_centers[kept] = std::move(out_centers[j]);
        out.row(kept) = out.row(j);
      }
      ++kept;
    }
    p = kept;
    out_centers.resize(static_cast<std::size_t>(p));
  }
  centers = std::move(out_centers);
  coeffs = out.topRows(p);
}

}  // namespace

bool PointLess::operator()(const Point& a, const Point& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

KernelExpansion::KernelExpansion(const KernelSpec& spec, int out_dim)
    : spec_(spec), out_dim_(out_dim), coeffs_(0, out_dim) {
  if (out_dim < 1) throw InputError("output dimension must be >= 1, got " + std::to_string(out_dim));
}

KernelExpansion::KernelExpansion(const KernelSpec& spec, std::vector<Point> centers, Eigen::MatrixXd coeffs)
    : spec_(spec), out_dim_(static_cast<int>(coeffs.cols())), centers_(std::move(centers)), coeffs_(std::move(coeffs)) {
  if (out_dim_ < 1) throw InputError("output dimension must be >= 1");
  if (static_cast<Eigen::Index>(centers_.size()) != coeffs_.rows()) {
    throw InputError("expansion has " + std::to_string(centers_.size()) + " centers but " +
                     std::to_string(coeffs_.rows()) + " coefficient rows");
  }
  for (const auto& c : centers_) check_point_dim(spec_, c);
  coalesce(centers_, coeffs_, false);
}

Radius::Radius(double value) : value_(value) {
  if (!(value > 0.0)) throw InputError("ball radius must be positive, got " + std::to_string(value));
}

Radius Radius::infinite() { return Radius(std::numeric_limits<double>::infinity()); }

bool Radius::is_infinite() const { return std::isinf(value_); }

void check_compatible(const KernelExpansion& f, const KernelExpansion& g) {
  if (!(f.spec() == g.spec())) throw InputError("expansions use different kernels");
  if (f.out_dim() != g.out_dim()) {
    throw InputError("output dimension mismatch: " + std::to_string(f.out_dim()) + " vs " +
                     std::to_string(g.out_dim()));
  }
}

OutputVector evaluate(const KernelExpansion& f, const Point& x) {
  check_point_dim(f.spec(), x);
  OutputVector out = OutputVector::Zero(f.out_dim());
  for (std::size_t j = 0; j < f.size(); ++j) {
    out += eval(f.spec(), f.centers()[j], x) * f.coeffs().row(static_cast<Eigen::Index>(j)).transpose();
  }
  return out;
}

KernelExpansion representer(const KernelSpec& spec, const Point& x, const OutputVector& y) {
  check_point_dim(spec, x);
  if (y.size() < 1) throw InputError("representer: empty output vector");
  Eigen::MatrixXd coeffs = y.transpose();
  return KernelExpansion(spec, {x}, std::move(coeffs));
}

double inner(const KernelExpansion& f, const KernelExpansion& g) {
  check_compatible(f, g);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto fi = f.coeffs().row(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double dot = fi.dot(g.coeffs().row(static_cast<Eigen::Index>(j)));
      if (dot == 0.0) continue;
      acc += dot * eval(f.spec(), f.centers()[i], g.centers()[j]);
    }
  }
  return acc;
}

double norm_sq(const KernelExpansion& f) {
  const double value = inner(f, f);
  if (value >= 0.0) return value;
  double scale = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    scale += f.coeffs().row(static_cast<Eigen::Index>(j)).squaredNorm() * eval(f.spec(), f.centers()[j], f.centers()[j]);
  }
  if (value < -1e-10 * scale) {
    throw NumericalError("norm_sq: quadratic form is " + std::to_string(value) + " at diagonal scale " +
                         std::to_string(scale) + "; Gram matrix is not positive semidefinite");
  }
  return 0.0;
}

double norm(const KernelExpansion& f) { return std::sqrt(norm_sq(f)); }

KernelExpansion combine(double a, const KernelExpansion& f, double b, const KernelExpansion& g) {
  check_compatible(f, g);
  std::vector<Point> centers;
  centers.reserve(f.size() + g.size());
  centers.insert(centers.end(), f.centers().begin(), f.centers().end());
  centers.insert(centers.end(), g.centers().begin(), g.centers().end());
  Eigen::MatrixXd coeffs(static_cast<Eigen::Index>(centers.size()), f.out_dim());
  const auto pf = static_cast<Eigen::Index>(f.size());
  coeffs.topRows(pf) = a * f.coeffs();
  coeffs.bottomRows(static_cast<Eigen::Index>(g.size())) = b * g.coeffs();
  coalesce(centers, coeffs, true);
  return KernelExpansion(f.spec(), std::move(centers), std::move(coeffs));
}

KernelExpansion scale(double a, const KernelExpansion& f) {
  if (a == 0.0) return KernelExpansion(f.spec(), f.out_dim());
  return KernelExpansion(f.spec(), f.centers(), a * f.coeffs());
}

KernelExpansion project_ball(const KernelExpansion& f, const Radius& r) {
  if (r.is_infinite()) return f;
  const double nf = norm(f);
  if (nf <= r.value()) return f;
  return scale(r.value() / nf, f);
}

}  // namespace rkhs
