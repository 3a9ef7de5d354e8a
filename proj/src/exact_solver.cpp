#include "rkhs_sgd/exact_solver.hpp"

#include <sstream>

#include "rkhs_sgd/errors.hpp"

namespace rkhs {

OracleSolution solve(const KernelSpec& spec, const Dataset& data, const MixtureWeights& w, const Radius& r) {
  if (w.n != data.size()) throw InputError("mixture weights do not match dataset size");
  if (spec.dim != data.dim()) throw InputError("kernel dimension does not match dataset dimension");
  const auto n = static_cast<Eigen::Index>(data.size());
  const double shift = w.q * static_cast<double>(n) / (1.0 - w.q);

  Eigen::MatrixXd system = gram(spec, data.points()).entries;
  system.diagonal().array() += shift;
  Eigen::MatrixXd labels(n, data.out_dim());
  for (Eigen::Index i = 0; i < n; ++i) labels.row(i) = data.labels()[static_cast<std::size_t>(i)].transpose();

  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "Cholesky factorization of the ridge-shifted Gram matrix failed (n = " << n << ", shift = " << shift
        << ", min diagonal = " << system.diagonal().minCoeff() << ", max diagonal = " << system.diagonal().maxCoeff()
        << ")";
    throw NumericalError(msg.str());
  }
  Eigen::MatrixXd alpha = llt.solve(labels);

  KernelExpansion fstar(spec, data.points(), alpha);
  const double residual = norm(riesz_grad_full(fstar, data, w));
  const bool ok = r.is_infinite() || norm(fstar) <= r.value();
  return {std::move(fstar), std::move(alpha), residual, ok};
}

double residual_tolerance(const Dataset& data) { return 1e-8 * (1.0 + data.max_label_norm()); }

double distance_sq(const KernelExpansion& f, const KernelExpansion& g) { return norm_sq(combine(1.0, f, -1.0, g)); }

}  // namespace rkhs
