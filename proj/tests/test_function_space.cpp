#include <doctest.h>

#include <cmath>
#include <limits>

#include "rkhs_sgd/errors.hpp"
#include "rkhs_sgd/function_space.hpp"
#include "support.hpp"

using namespace rkhs;
using namespace rkhs::testing;

namespace {

const KernelSpec kG1(KernelFamily::gaussian, 1.0, 1);

KernelExpansion two_bumps() {
  Eigen::MatrixXd c(2, 1);
  c << 1.0, 1.0;
  return KernelExpansion(kG1, {pt({0.0}), pt({2.0})}, c);
}

OutputVector scalar(double v) { return OutputVector::Constant(1, v); }

}  // namespace

TEST_CASE("evaluate") {
  const KernelExpansion zero(kG1, 1);
  CHECK(zero.empty());
  CHECK(evaluate(zero, pt({0.4}))[0] == 0.0);

  const auto one = representer(kG1, pt({0.7}), scalar(2.5));
  CHECK(evaluate(one, pt({0.7}))[0] == 2.5);

  CHECK(evaluate(two_bumps(), pt({0.0}))[0] == doctest::Approx(1.1353352832).epsilon(1e-10));
  CHECK_THROWS_AS(evaluate(two_bumps(), pt({0.0, 1.0})), InputError);
}

TEST_CASE("representer inner products") {
  const KernelSpec spec(KernelFamily::laplacian, 0.8, 2);
  OutputVector y1(2), y2(2);
  y1 << 1.5, -0.5;
  y2 << 0.25, 2.0;
  const Point x1 = pt({0.1, -0.3}), x2 = pt({0.6, 0.2});
  const auto r1 = representer(spec, x1, y1);
  const auto r2 = representer(spec, x2, y2);
  CHECK(norm_sq(representer(spec, x1, OutputVector::Zero(2))) == 0.0);
  CHECK(inner(r1, r1) == doctest::Approx(y1.squaredNorm()).epsilon(1e-14));
  CHECK(inner(r1, r2) == doctest::Approx(y1.dot(y2) * eval(spec, x1, x2)).epsilon(1e-14));
}

TEST_CASE("norms") {
  CHECK(norm_sq(KernelExpansion(kG1, 1)) == 0.0);
  Eigen::MatrixXd c(1, 1);
  c << 3.0;
  const KernelExpansion three(kG1, {pt({0.2})}, c);
  CHECK(inner(three, three) == 9.0);
  CHECK(norm_sq(two_bumps()) == doctest::Approx(2.2706705665).epsilon(1e-10));
}

TEST_CASE("norm_sq is never negative for near-cancelling combinations") {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 200; ++t) {
    const auto spec = spec_of(kFamilies[t % 3], 2, 3.0);
    const auto f = random_expansion(gen, spec, 1, 6);
    const auto g = combine(1.0, f, 1e-9, random_expansion(gen, spec, 1, 2, f.centers()));
    REQUIRE(norm_sq(combine(1.0, f, -1.0, g)) >= 0.0);
  }
}

TEST_CASE("combine coalesces and is linear") {
  const auto f = two_bumps();
  const KernelExpansion zero(kG1, 1);
  const auto same = combine(1.0, f, 0.0, zero);
  CHECK(same.size() == f.size());
  CHECK(same.coeffs() == f.coeffs());

  const auto cancel = combine(1.0, f, -1.0, f);
  CHECK(norm_sq(cancel) <= 1e-12 * norm_sq(f));
  CHECK(cancel.empty());

  // coinciding center {0} is merged
  const auto g = representer(kG1, pt({0.0}), scalar(4.0));
  const auto h = combine(2.0, f, 3.0, g);
  CHECK(h.size() == 2);

  std::mt19937_64 gen(3);
  for (int t = 0; t < 100; ++t) {
    const auto spec = spec_of(kFamilies[t % 3], 2);
    const auto a = random_expansion(gen, spec, 2, 1 + t % 5);
    const auto b = random_expansion(gen, spec, 2, 1 + t % 7, a.centers());
    const Point x = random_point(gen, 2);
    const OutputVector lhs = evaluate(combine(2.0, a, 3.0, b), x);
    const OutputVector rhs = 2.0 * evaluate(a, x) + 3.0 * evaluate(b, x);
    REQUIRE((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("construction merges duplicate centers") {
  Eigen::MatrixXd c(3, 1);
  c << 1.0, 2.0, 4.0;
  const KernelExpansion f(kG1, {pt({0.5}), pt({1.0}), pt({0.5})}, c);
  CHECK(f.size() == 2);
  CHECK(f.coeffs()(0, 0) == 5.0);
  CHECK_THROWS_AS(KernelExpansion(kG1, {pt({0.5})}, Eigen::MatrixXd(2, 1)), InputError);
  CHECK_THROWS_AS(KernelExpansion(kG1, 0), InputError);
}

TEST_CASE("mismatched expansions are rejected") {
  const auto f = two_bumps();
  const KernelSpec other(KernelFamily::laplacian, 1.0, 1);
  const auto g = representer(other, pt({0.0}), scalar(1.0));
  CHECK_THROWS_AS(inner(f, g), InputError);
  CHECK_THROWS_AS(combine(1.0, f, 1.0, KernelExpansion(kG1, 2)), InputError);
}

TEST_CASE("ball projection") {
  const auto unit = representer(kG1, pt({0.0}), scalar(1.0));
  const auto half = scale(0.5, unit);
  CHECK(project_ball(half, Radius(1.0)).coeffs() == half.coeffs());

  const auto big = scale(2.0, unit);
  const auto projected = project_ball(big, Radius(1.0));
  CHECK(projected.coeffs()(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm(projected) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(project_ball(scale(1e6, unit), Radius::infinite()).coeffs()(0, 0) == 1e6);
  CHECK_THROWS_AS(Radius(0.0), InputError);
  CHECK_THROWS_AS(Radius(-1.0), InputError);
}

TEST_CASE("Hilbert-space properties on random expansions") {
  std::mt19937_64 gen(99);
  for (int t = 0; t < 100; ++t) {
    const auto spec = spec_of(kFamilies[t % 3], 1 + t % 4, 0.5 + 0.1 * (t % 7));
    const int m = 1 + t % 3;
    const auto f = random_expansion(gen, spec, m, 1 + t % 6);
    const auto g = random_expansion(gen, spec, m, 1 + t % 4);
    const Point x = random_point(gen, spec.dim);
    const OutputVector y = random_output(gen, m);

    // reproducing property
    const double lhs = inner(representer(spec, x, y), f);
    const double rhs = y.dot(evaluate(f, x));
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * (1.0 + y.norm() * norm(f)));

    // embedding |f(x)| <= M |f|_H
    REQUIRE(evaluate(f, x).norm() <= sup_bound(spec) * norm(f) + 1e-10);

    // symmetry and Cauchy-Schwarz
    const double fg = inner(f, g);
    REQUIRE(std::abs(fg - inner(g, f)) <= 1e-12 * (1.0 + std::abs(fg)));
    REQUIRE(fg * fg <= norm_sq(f) * norm_sq(g) * (1.0 + 1e-10));

    // projection: idempotent and non-expansive
    const Radius r(0.5 + (t % 5) * 0.3);
    const auto pf = project_ball(f, r);
    const auto pg = project_ball(g, r);
    REQUIRE(norm(pf) <= r.value() * (1.0 + 1e-12));
    REQUIRE(norm(combine(1.0, project_ball(pf, r), -1.0, pf)) <= 1e-12 * (1.0 + norm(pf)));
    REQUIRE(norm(combine(1.0, pf, -1.0, pg)) <= norm(combine(1.0, f, -1.0, g)) + 1e-10);
  }
}
