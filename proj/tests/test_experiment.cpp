#include <doctest.h>

#include <cmath>
#include <limits>

#include "rkhs_sgd/errors.hpp"
#include "rkhs_sgd/experiment.hpp"
#include "support.hpp"

using namespace rkhs;
using namespace rkhs::testing;

namespace {

const KernelSpec kRef(KernelFamily::gaussian, 1.0, 2);

StudyConfig reference_study(std::uint64_t trials = 200, std::uint64_t steps = 20000) {
  StudyConfig cfg{.sgd = SgdConfig{.weights = MixtureWeights(0.3, 20)}};
  cfg.sgd.steps = steps;
  cfg.sgd.record_every = 100;
  cfg.sgd.seed = 1;
  cfg.trials = trials;
  return cfg;
}

std::vector<std::uint64_t> grid(std::uint64_t n, std::uint64_t every) {
  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = every; k <= n * every; k += every) ks.push_back(k);
  return ks;
}

}  // namespace

TEST_CASE("fit_rate recovers exact power laws") {
  const auto ks = grid(200, 100);
  std::vector<double> inv, inv_sq;
  for (auto k : ks) {
    inv.push_back(7.0 / static_cast<double>(k));
    inv_sq.push_back(3.0 / (static_cast<double>(k) * static_cast<double>(k)));
  }
  const auto a = fit_rate(ks, inv, 0.5);
  CHECK(a.slope == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(a.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-9));
  CHECK(a.points == 100);
  CHECK(a.ci < 1e-9);
  const auto b = fit_rate(ks, inv_sq, 0.25);
  CHECK(b.slope == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(b.points == 50);
}

TEST_CASE("fit_rate confidence interval matches a hand computation") {
  // Ten points, alternating +-e residuals around log y = 1 - x.
  std::vector<std::uint64_t> ks;
  std::vector<double> ys;
  const double e = 0.01;
  for (int i = 0; i < 10; ++i) {
    const auto k = static_cast<std::uint64_t>(1) << i;
    ks.push_back(k);
    ys.push_back(std::exp(1.0 - std::log(static_cast<double>(k)) + (i % 2 ? e : -e)));
  }
  const auto fit = fit_rate(ks, ys, 0.99);
  double mx = 0.0;
  for (auto k : ks) mx += std::log(static_cast<double>(k)) / 10.0;
  double sxx = 0.0, sxy = 0.0, my = 0.0;
  for (std::size_t i = 0; i < 10; ++i) my += std::log(ys[i]) / 10.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double dx = std::log(static_cast<double>(ks[i])) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ys[i]) - my);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double r = std::log(ys[i]) - (my + slope * (std::log(static_cast<double>(ks[i])) - mx));
    ssr += r * r;
  }
  // t_{0.975, 8} = 2.306004135
  const double ci = 2.306004135 * std::sqrt(ssr / 8.0 / sxx);
  CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-12));
  CHECK(fit.ci == doctest::Approx(ci).epsilon(1e-8));
}

TEST_CASE("fit_rate errors") {
  const auto ks = grid(30, 10);
  std::vector<double> ys(30, 1.0);
  CHECK_THROWS_AS(fit_rate(ks, ys, 0.3), InputError);  // 9 tail points
  ys[29] = 0.0;
  CHECK_THROWS_AS(fit_rate(ks, ys, 0.5), NumericalError);
  ys[29] = -1.0;
  CHECK_THROWS_AS(fit_rate(ks, ys, 0.5), NumericalError);
  CHECK_THROWS_AS(fit_rate(ks, std::vector<double>(29, 1.0), 0.5), InputError);
  CHECK_THROWS_AS(fit_rate(ks, std::vector<double>(30, 1.0), 1.0), InputError);
}

TEST_CASE("summarize") {
  TrialMatrix m{{1, 2}, Eigen::MatrixXd(3, 2), {}};
  m.err_sq << 1.0, 4.0, 2.0, 4.0, 3.0, 4.0;
  std::vector<double> mean, se;
  summarize(m, mean, se);
  CHECK(mean == std::vector<double>{2.0, 4.0});
  CHECK(se[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(se[1] == 0.0);

  TrialMatrix one{{1}, Eigen::MatrixXd::Constant(1, 1, 5.0), {}};
  summarize(one, mean, se);
  CHECK(mean[0] == 5.0);
  CHECK(se[0] == 0.0);
}

TEST_CASE("bound report") {
  const KernelSpec spec(KernelFamily::gaussian, 1.0, 1);
  const Dataset d1({pt({0.4})}, {OutputVector::Constant(1, 2.0)});
  const MixtureWeights w(0.5, 1);
  const auto fstar = solve(spec, d1, w).fstar;
  CHECK(bound_term(fstar, d1, w) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bound_report(fstar, d1, w, constants(w, spec)) == doctest::Approx(4.0).epsilon(1e-14));

  const Dataset zeros({pt({0.4}), pt({0.1})}, {OutputVector::Zero(1), OutputVector::Zero(1)});
  const MixtureWeights w2(0.3, 2);
  CHECK(bound_report(solve(spec, zeros, w2).fstar, zeros, w2, constants(w2, spec)) == 0.0);
}

TEST_CASE("single trial, single iterate") {
  const auto data = reference_dataset();
  auto cfg = reference_study(1, 1);
  const auto result = run_study(cfg, data, kRef);
  REQUIRE(result.record.ks == std::vector<std::uint64_t>{1});
  CHECK(result.record.mean_err_sq[0] == doctest::Approx(norm_sq(result.oracle.fstar)).epsilon(1e-12));
  CHECK(result.record.std_error[0] == 0.0);
  CHECK_FALSE(result.record.fit.has_value());
  CHECK_FALSE(result.record.max_iterate_norm.has_value());
}

TEST_CASE("infeasible radius is a configuration error") {
  const auto data = reference_dataset();
  auto cfg = reference_study(2, 100);
  const double nf = norm(solve(kRef, data, cfg.sgd.weights).fstar);
  cfg.sgd.radius = Radius(0.9 * nf);
  CHECK_THROWS_AS(run_study(cfg, data, kRef), ConfigError);
  cfg.sgd.radius = Radius(1.1 * nf);
  const auto result = run_study(cfg, data, kRef);
  REQUIRE(result.record.max_iterate_norm.has_value());
  CHECK(*result.record.max_iterate_norm <= 1.1 * nf * (1.0 + 1e-12));
}

TEST_CASE("study results do not depend on the thread count") {
  const auto data = reference_dataset();
  auto cfg = reference_study(24, 3000);
  cfg.threads = 1;
  const auto a = run_study(cfg, data, kRef);
  cfg.threads = 5;
  const auto b = run_study(cfg, data, kRef);
  CHECK(a.record.mean_err_sq == b.record.mean_err_sq);
  CHECK(a.record.std_error == b.record.std_error);
  REQUIRE(a.record.fit.has_value());
  CHECK(a.record.fit->slope == b.record.fit->slope);
}

TEST_CASE("reference study") {
  const auto data = reference_dataset();
  const auto result = run_study(reference_study(), data, kRef);
  const auto& rec = result.record;
  REQUIRE(rec.fit.has_value());
  MESSAGE("slope " << rec.fit->slope << " +- " << rec.fit->ci);
  CHECK(rec.fit->slope >= -1.25);
  CHECK(rec.fit->slope <= -0.75);
  CHECK(rec.fit->points == 101);

  // Dyadic block averages of the mean error decrease.
  double previous = std::numeric_limits<double>::infinity();
  for (std::uint64_t lo = 100; lo < 20000; lo *= 2) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < rec.ks.size(); ++j) {
      if (rec.ks[j] >= lo && rec.ks[j] < 2 * lo) {
        sum += rec.mean_err_sq[j];
        ++count;
      }
    }
    CHECK(sum / count < previous);
    previous = sum / count;
  }

  // k * E|F_k - f*|^2 stays of the order of the k-free factor.
  const double scaled = 20000.0 * rec.mean_err_sq.back();
  MESSAGE("k * mean at K = " << scaled << ", bound scale " << rec.bound_scale);
  CHECK(scaled > 0.0);
  CHECK(scaled < 100.0 * rec.bound_scale);
}

TEST_CASE("independent trial blocks agree within sampling error") {
  const auto data = reference_dataset();
  auto cfg = reference_study(0, 5000);
  const SgdProblem problem(data, kRef, solve(kRef, data, cfg.sgd.weights).fstar);
  const auto first = run_trials(cfg.sgd, problem, 0, 150, 0);
  const auto second = run_trials(cfg.sgd, problem, 150, 150, 0);
  std::vector<double> m1, s1, m2, s2;
  summarize(first, m1, s1);
  summarize(second, m2, s2);
  for (std::size_t j = 1; j < m1.size(); j += 10) {
    const double pooled = std::sqrt(s1[j] * s1[j] + s2[j] * s2[j]);
    CHECK(std::abs(m1[j] - m2[j]) <= 4.0 * pooled);
  }
}

TEST_CASE("run_trials requires an oracle") {
  const auto data = reference_dataset();
  const SgdProblem problem(data, kRef);
  CHECK_THROWS_AS(run_trials(reference_study().sgd, problem, 0, 1, 1), InputError);
}
