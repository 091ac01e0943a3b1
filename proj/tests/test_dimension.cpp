#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qcurv/dimension.hpp"
#include "qcurv/errors.hpp"

using namespace qcurv;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

// Δ^i |x|^{2i} = Π_{k=1}^{i} 2k(2k+n−2), ball average of |x|^{2i} is n/(n+2i) R^{2i}.
double pizzetti_from_ball_average(int n, int i) {
  double lap = 1.0;
  for (int k = 1; k <= i; ++k) lap *= 2.0 * k * (2.0 * k + n - 2.0);
  return n / (n + 2.0 * i) / lap;
}

double radial_laplacian_fd(int n, double (*g)(double, int), int k, double r) {
  const double h = 1e-4 * r;
  const double d1 = (g(r + h, k) - g(r - h, k)) / (2 * h);
  const double d2 = (g(r + h, k) - 2 * g(r, k) + g(r - h, k)) / (h * h);
  return d2 + (n - 1) / r * d1;
}

double log_or_power(double r, int k) { return k == 0 ? std::log(r) : std::pow(r, -2.0 * k); }

}  // namespace

TEST_CASE("n = 4 constants") {
  const auto ctx = make_context(4);
  CHECK(ctx.m == 2);
  CHECK(ctx.c_n == Approx(4 * pi * pi).epsilon(1e-15));
  CHECK(ctx.omega_n_minus_1 == Approx(2 * pi * pi).epsilon(1e-15));
  CHECK(ctx.omega_n == Approx(8 * pi * pi / 3).epsilon(1e-15));
  CHECK(ctx.omega_n_minus_2 == Approx(4 * pi).epsilon(1e-15));
  CHECK(ctx.q_sphere == 3.0);
  REQUIRE(ctx.pizzetti.size() == 2);
  CHECK(ctx.pizzetti[0] == 1.0);
  CHECK(ctx.pizzetti[1] == Approx(1.0 / 12).epsilon(1e-15));
  REQUIRE(ctx.d_chain.size() == 1);
  CHECK(ctx.d(1) == -2.0);
}

TEST_CASE("c_n, sphere measures and q_sphere agree across dimensions") {
  for (int n = 4; n <= 16; n += 2) {
    CAPTURE(n);
    const auto ctx = make_context(n);
    const int m = n / 2;
    CHECK(ctx.c_n == Approx(std::pow(2.0, n - 2) * std::tgamma(m) * std::pow(pi, m)).epsilon(1e-13));
    CHECK(ctx.c_n == Approx(0.5 * ctx.omega_n * ctx.q_sphere).epsilon(1e-14));
    CHECK(ctx.q_sphere == Approx(std::tgamma(n) / 2).epsilon(1e-14));
    CHECK(ctx.omega_n_minus_1 == Approx(2 * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0)).epsilon(1e-13));
    CHECK(ctx.omega_n == Approx(2 * std::pow(pi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0)).epsilon(1e-13));
    CHECK(ctx.polar_weight() == Approx(ctx.omega_n_minus_2 / ctx.omega_n_minus_1));
  }
}

TEST_CASE("sphere_measure matches the gamma-function formula") {
  for (int k = 0; k <= 20; ++k) {
    CAPTURE(k);
    CHECK(sphere_measure(k) == Approx(2 * std::pow(pi, (k + 1) / 2.0) / std::tgamma((k + 1) / 2.0)).epsilon(1e-13));
  }
  CHECK(sphere_measure(1) == Approx(2 * pi));
  CHECK(sphere_measure(2) == Approx(4 * pi));
}

TEST_CASE("Pizzetti coefficients reproduce ball averages of |x|^{2i}") {
  for (int n : {4, 6, 8, 10}) {
    const auto ctx = make_context(n);
    REQUIRE(ctx.pizzetti.size() == static_cast<std::size_t>(n / 2));
    for (int i = 0; i < n / 2; ++i) {
      CAPTURE(n);
      CAPTURE(i);
      CHECK(ctx.pizzetti[static_cast<std::size_t>(i)] == Approx(pizzetti_from_ball_average(n, i)).epsilon(1e-14));
    }
  }
  CHECK(make_context(6).pizzetti[1] == Approx(1.0 / 16).epsilon(1e-15));
  CHECK(make_context(6).pizzetti[2] == Approx(1.0 / 640).epsilon(1e-15));
}

TEST_CASE("d-chain matches finite-difference Laplacians of the kernels") {
  // (−Δ) log r = d_1 r^{-2};  (−Δ) r^{-2k} = (d_{k+1}/d_k) r^{-2k-2}.
  for (int n : {6, 8, 10}) {
    const auto ctx = make_context(n);
    const double r = 1.3;
    CAPTURE(n);
    CHECK(-radial_laplacian_fd(n, log_or_power, 0, r) == Approx(ctx.d(1) * std::pow(r, -2.0)).epsilon(1e-6));
    for (int k = 1; k + 1 <= ctx.m - 1; ++k) {
      CAPTURE(k);
      CHECK(-radial_laplacian_fd(n, log_or_power, k, r) ==
            Approx(ctx.d(k + 1) / ctx.d(k) * std::pow(r, -2.0 * k - 2)).epsilon(1e-6));
    }
  }
  CHECK(make_context(6).d(2) == -16.0);
}

TEST_CASE("invalid dimensions and indices are rejected") {
  CHECK_THROWS_AS(make_context(5), DimensionError);
  CHECK_THROWS_AS(make_context(2), DimensionError);
  CHECK_THROWS_AS(make_context(0), DimensionError);
  CHECK_THROWS_AS(make_context(-4), DimensionError);
  CHECK_THROWS_AS(make_context(66), DimensionError);
  const auto ctx = make_context(6);
  CHECK_THROWS_AS(ctx.d(0), DomainError);
  CHECK_THROWS_AS(ctx.d(3), DomainError);
  CHECK_NOTHROW(ctx.d(2));
}
