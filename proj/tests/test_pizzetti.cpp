#include <cmath>

#include "doctest.h"
#include "qcurv/errors.hpp"
#include "qcurv/pizzetti.hpp"

using namespace qcurv;
using doctest::Approx;

namespace {
QuadratureSpec spec16() {
  QuadratureSpec spec;
  spec.sphere_nodes = 16;
  return spec;
}
}  // namespace

TEST_CASE("polynomial algebra") {
  const int n = 4;
  const auto x1 = Polynomial::coordinate(n, 0);
  const auto r2 = Polynomial::radius_squared(n);
  const std::vector<double> p{1.0, 2.0, -1.0, 0.5};
  CHECK(r2(p) == Approx(6.25));
  CHECK((r2 * x1)(p) == Approx(6.25));
  CHECK((r2 + Polynomial::constant(n, 3.0))(p) == Approx(9.25));
  CHECK((x1 * 2.5)(p) == Approx(2.5));
  // Δ|x|^{2k} = 2k(2k+n−2)|x|^{2k−2}
  const auto lap4 = (r2 * r2).laplacian();
  CHECK(lap4(p) == Approx(4 * 6 * 6.25));
  CHECK(r2.laplacian()(p) == Approx(2.0 * n));
  CHECK(x1.laplacian().is_zero());
  CHECK((r2 * r2 * x1).degree() == 5);
  const std::vector<double> shift{0.5, -1.0, 0.0, 2.0};
  const auto shifted = (r2 * x1).shifted(shift);
  std::vector<double> moved(4);
  for (int i = 0; i < 4; ++i) moved[i] = p[i] + shift[i];
  CHECK(shifted(p) == Approx((r2 * x1)(moved)));
  CHECK_THROWS_AS(Polynomial::coordinate(n, 4), DomainError);
  CHECK_THROWS_AS(r2 + Polynomial::constant(3, 1.0), DomainError);
}

TEST_CASE("predictions in closed form") {
  const auto ctx = make_context(4);
  const std::vector<double> origin(4, 0.0);
  const auto r2 = make_test_fn("|x|^2", Polynomial::radius_squared(4));
  CHECK(r2.degree_of_polyharmonicity == 2);
  for (double R : {0.5, 1.0, 3.0}) CHECK(pizzetti_prediction(ctx, r2, origin, R) == Approx(2.0 / 3 * R * R).epsilon(1e-15));
  CHECK(pizzetti_prediction(ctx, make_test_fn("1", Polynomial::constant(4, 1.0)), origin, 2.0) == 1.0);
  const auto x1x2 = make_test_fn("x1x2", Polynomial::coordinate(4, 0) * Polynomial::coordinate(4, 1));
  CHECK(pizzetti_prediction(ctx, x1x2, origin, 2.0) == 0.0);
  const auto x1 = make_test_fn("x1", Polynomial::coordinate(4, 0));
  const std::vector<double> along{1.7, 0, 0, 0};
  CHECK(pizzetti_prediction(ctx, x1, along, 1.0) == Approx(1.7));
  const auto r4 = make_test_fn("|x|^4", Polynomial::radius_squared(4) * Polynomial::radius_squared(4));
  CHECK(r4.degree_of_polyharmonicity == 3);
  CHECK_THROWS_AS(pizzetti_prediction(ctx, r4, origin, 1.0), OrderError);
  CHECK_THROWS_AS(pizzetti_prediction(ctx, r2, origin, 0.0), DomainError);
}

TEST_CASE("ball averages reproduce the predictions") {
  const auto spec = spec16();
  const auto ctx = make_context(4);
  const std::vector<double> origin(4, 0.0);
  const auto r2 = make_test_fn("|x|^2", Polynomial::radius_squared(4));
  CHECK(pizzetti_verify(ctx, r2, origin, 1.0, spec) < 1e-8);
  const auto r2p3 = make_test_fn("|x|^2+3", Polynomial::radius_squared(4) + Polynomial::constant(4, 3.0));
  CHECK(pizzetti_verify(ctx, r2p3, origin, 2.0, spec) < 1e-8);
  const auto x1 = make_test_fn("x1", Polynomial::coordinate(4, 0));
  for (double c : {-2.0, 0.5, 4.0}) {
    const std::vector<double> x0{c, 0, 0, 0};
    CHECK(pizzetti_verify(ctx, x1, x0, 1.3, spec) < 1e-8);
  }
  for (int n : {4, 6}) {
    const auto c = make_context(n);
    std::vector<double> x0(static_cast<std::size_t>(n), 0.3);
    x0[1] = -0.7;
    for (const auto& h : pizzetti_generators(c)) {
      CAPTURE(n);
      CAPTURE(h.name);
      CHECK(h.degree_of_polyharmonicity <= c.m);
      CHECK(pizzetti_verify(c, h, x0, 1.5, spec) < 1e-8);
    }
  }
}

TEST_CASE("translation covariance") {
  const auto spec = spec16();
  for (int n : {4, 6}) {
    const auto ctx = make_context(n);
    std::vector<double> x0(static_cast<std::size_t>(n), 0.0);
    x0[0] = 0.8;
    x0[2] = -1.1;
    const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
    const auto p = Polynomial::radius_squared(n) * Polynomial::coordinate(n, 0) + Polynomial::coordinate(n, 1);
    const auto h = make_test_fn("h", p);
    const auto moved = make_test_fn("h(.+x0)", p.shifted(x0));
    CHECK(std::abs(pizzetti_verify(ctx, h, x0, 1.2, spec) - pizzetti_verify(ctx, moved, origin, 1.2, spec)) < 1e-10);
    CHECK(pizzetti_prediction(ctx, h, x0, 1.2) == Approx(pizzetti_prediction(ctx, moved, origin, 1.2)).epsilon(1e-13));
  }
}
