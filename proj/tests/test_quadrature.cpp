#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "qcurv/errors.hpp"
#include "qcurv/quadrature.hpp"

using namespace qcurv;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

double norm2(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}
}  // namespace

TEST_CASE("Gauss nodes sit at the odd Kronrod indices") {
  const auto& kronrod = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
  const auto& gauss = boost::math::quadrature::gauss<double, 10>::abscissa();
  REQUIRE(kronrod.size() == 11);
  REQUIRE(gauss.size() == 5);
  for (std::size_t i = 0; i < gauss.size(); ++i) CHECK(kronrod[2 * i + 1] == gauss[i]);
}

TEST_CASE("integrate_interval") {
  QuadratureSpec spec;
  CHECK(integrate_interval([](double x) { return std::sin(x); }, 0, pi, spec).value == Approx(2.0).epsilon(1e-13));
  CHECK(integrate_interval([](double x) { return std::pow(x, 20); }, 0, 1, spec).value ==
        Approx(1.0 / 21).epsilon(1e-14));
  const auto sq = integrate_interval([](double x) { return std::sqrt(x); }, 0, 1, spec);
  CHECK(sq.value == Approx(2.0 / 3).epsilon(1e-9));
  CHECK(sq.error >= 0.0);
  CHECK(sq.subdivisions >= 1);
  CHECK(integrate_interval([](double) { return 1.0; }, 2, 2, spec).value == 0.0);

  QuadratureSpec tight;
  tight.max_subdivisions = 2;
  tight.rel_tol = 1e-14;
  tight.abs_tol = 1e-300;
  CHECK_THROWS_AS(integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-3, 1, tight), ConvergenceError);
  try {
    integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-3, 1, tight);
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
  CHECK_THROWS_AS(integrate_interval([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0, 1, spec),
                  DomainError);
}

TEST_CASE("QuadratureSpec validation") {
  QuadratureSpec spec;
  CHECK_NOTHROW(spec.validate());
  spec.rel_tol = -1;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = {};
  spec.max_subdivisions = 0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = {};
  spec.sphere_nodes = 0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}

TEST_CASE("integrate_halfline with each decay model") {
  QuadratureSpec spec;
  const auto p = integrate_halfline([](double r) { return std::pow(1 + r, -3.0); }, 0, spec, DecayModel::power(3));
  CHECK(p.value == Approx(0.5).epsilon(1e-9));
  CHECK(p.tail_bound > 0.0);
  CHECK(integrate_halfline([](double r) { return 1.0 / (1 + r * r); }, 0, spec, DecayModel::power(2)).value ==
        Approx(pi / 2).epsilon(1e-8));
  CHECK(integrate_halfline([](double r) { return std::exp(-2 * r); }, 1, spec, DecayModel::exponential(2)).value ==
        Approx(0.5 * std::exp(-2.0)).epsilon(1e-9));
  CHECK(integrate_halfline([](double r) { return std::exp(-r * r); }, 0, spec, DecayModel::gaussian(1)).value ==
        Approx(std::sqrt(pi) / 2).epsilon(1e-9));
  CHECK_THROWS_AS(integrate_halfline([](double r) { return 1.0 / (1 + r); }, 0, spec, DecayModel::power(1)),
                  TailError);
}

TEST_CASE("integrate_log_singular against closed forms") {
  QuadratureSpec spec;
  for (double a : {0.0, 0.3, 0.5, 1.0}) {
    CAPTURE(a);
    const auto F = [a](double s) { return (s == a ? 0.0 : (s - a) * std::log(std::abs(s - a))) - s; };
    const double exact = F(1.0) - F(0.0);
    CHECK(integrate_log_singular([a](double s) { return std::log(std::abs(s - a)); }, a, 0, 1, spec).value ==
          Approx(exact).epsilon(1e-9));
  }
  // singular point outside the interval
  CHECK(integrate_log_singular([](double s) { return std::log(s); }, -1, 1, 2, spec).value ==
        Approx(2 * std::log(2.0) - 1).epsilon(1e-10));
}

TEST_CASE("gauss_legendre agrees with boost's table") {
  std::vector<double> x, w;
  gauss_legendre(10, x, w);
  REQUIRE(x.size() == 10);
  const auto& bx = boost::math::quadrature::gauss<double, 10>::abscissa();
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < bx.size(); ++i) {
    CHECK(sorted[5 + i] == Approx(bx[i]).epsilon(1e-14));
    CHECK(sorted[4 - i] == Approx(-bx[i]).epsilon(1e-14));
  }
  double sum = 0, x18 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += w[i];
    x18 += w[i] * std::pow(x[i], 18);
  }
  CHECK(sum == Approx(2.0).epsilon(1e-14));
  CHECK(x18 == Approx(2.0 / 19).epsilon(1e-13));
}

TEST_CASE("sphere rules: normalization and low moments") {
  for (int n : {4, 6, 8}) {
    CAPTURE(n);
    const auto ctx = make_context(n);
    QuadratureSpec spec;
    spec.sphere_nodes = 12;
    const auto& rule = sphere_rule(ctx, spec.sphere_nodes);
    REQUIRE(rule.dim == n);
    double wsum = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      wsum += rule.weights[i];
      CHECK(rule.weights[i] > 0.0);
      CHECK(norm2(rule.direction(i)) == Approx(1.0).epsilon(1e-14));
    }
    CHECK(wsum == Approx(1.0).epsilon(1e-12));  // summation roundoff over thousands of nodes
    const auto mean = [&](auto f) { return sphere_quadrature(ctx, f, spec); };
    CHECK(mean([](std::span<const double> t) { return t[0] * t[0]; }) == Approx(1.0 / n).epsilon(1e-13));
    CHECK(std::abs(mean([](std::span<const double> t) { return t[0] * t[1]; })) < 1e-14);
    CHECK(std::abs(mean([](std::span<const double> t) { return t[0]; })) < 1e-14);
    CHECK(std::abs(mean([](std::span<const double> t) { return t[0] * t[0] * t[1]; })) < 1e-14);
  }
  const auto ctx4 = make_context(4);
  QuadratureSpec spec;
  spec.sphere_nodes = 12;
  CHECK(sphere_quadrature(ctx4, [](std::span<const double> t) { return std::pow(t[3], 4); }, spec) ==
        Approx(3.0 / 24).epsilon(1e-13));
  CHECK(sphere_quadrature(ctx4, [](std::span<const double> t) { return t[0] * t[0] * t[2] * t[2]; }, spec) ==
        Approx(1.0 / 24).epsilon(1e-13));
}

TEST_CASE("polar_mean and the log-kernel sphere mean") {
  const auto ctx = make_context(4);
  QuadratureSpec spec;
  CHECK(polar_mean(ctx, [](double) { return 1.0; }, pi, spec).value == Approx(1.0).epsilon(1e-12));
  // On S³ the first coordinate has density (2/π)√(1−t²) on [−1, 1].
  boost::math::quadrature::tanh_sinh<double> ts;
  for (auto [r, s] : {std::pair{2.0, 1.0}, std::pair{1.0, 3.0}, std::pair{1.0, 0.999}, std::pair{10.0, 1.0}}) {
    CAPTURE(r);
    CAPTURE(s);
    const double oracle = ts.integrate(
        [&](double t) {
          const double d2 = r * r + s * s - 2 * r * s * t;
          return d2 <= 0 ? 0.0 : 0.5 * std::log(d2) * (2 / pi) * std::sqrt(1 - t * t);
        },
        -1.0, 1.0);
    CHECK(sphere_mean_log_kernel(ctx, r, s, spec) == Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("ball integrals and the layer-cake identity") {
  QuadratureSpec spec;
  spec.sphere_nodes = 8;
  for (int n : {4, 6}) {
    const auto ctx = make_context(n);
    const DirectionFn one = [](std::span<const double>) { return 1.0; };
    const DirectionFn sq = [](std::span<const double> x) { return norm2(x); };
    for (double R : {1.0, 2.0}) {
      CAPTURE(n);
      CAPTURE(R);
      CHECK(ball_integral(ctx, one, R, spec) == Approx(ctx.omega_n_minus_1 * std::pow(R, n) / n).epsilon(1e-12));
      CHECK(ball_integral(ctx, sq, R, spec) == Approx(ctx.omega_n_minus_1 * std::pow(R, n + 2) / (n + 2)).epsilon(1e-12));
      CHECK(layer_cake_lhs(ctx, one, R, spec) == Approx(R * R / (2.0 * n)).epsilon(1e-10));
      CHECK(layer_cake_rhs(ctx, one, R, spec) == Approx(R * R / (2.0 * n)).epsilon(1e-10));
      CHECK(layer_cake_lhs(ctx, sq, R, spec) == Approx(std::pow(R, 4) / (4.0 * (n + 2))).epsilon(1e-10));
      CHECK(layer_cake_rhs(ctx, sq, R, spec) == Approx(std::pow(R, 4) / (4.0 * (n + 2))).epsilon(1e-9));
    }
  }
}
