#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qcurv/errors.hpp"
#include "qcurv/profiles.hpp"

using namespace qcurv;
using doctest::Approx;

namespace {

double u_alpha(double a, double r) { return 0.5 * a * std::log(2.0 / (1.0 + r * r)); }
double du_alpha(double a, double r) { return -a * r / (1.0 + r * r); }
double d2u_alpha(double a, double r) { return -a * (1.0 - r * r) / ((1.0 + r * r) * (1.0 + r * r)); }

double fd(const RadialProfile& u, double r, int order, double h) {
  if (order == 1) return (u.eval(r + h) - u.eval(r - h)) / (2 * h);
  return (u.eval(r + h, order - 1) - u.eval(r - h, order - 1)) / (2 * h);
}

}  // namespace

TEST_CASE("sphere family values and derivatives match closed forms") {
  const auto ctx = make_context(4);
  for (double a : {0.25, 0.5, 1.0}) {
    const auto u = catalog_sphere_family(ctx, a);
    CHECK(u->max_order() == ctx.n);
    CHECK(u->provenance() == RadialProfile::Provenance::closed_form);
    REQUIRE(u->asymptotic_slope_hint().has_value());
    CHECK(*u->asymptotic_slope_hint() == Approx(-a));
    for (double r : {0.0, 0.3, 1.0, 2.5, 10.0, 1e3}) {
      CAPTURE(a);
      CAPTURE(r);
      CHECK(u->eval(r) == Approx(u_alpha(a, r)).epsilon(1e-14));
      CHECK((*u)(r) == u->eval(r));
      CHECK(u->eval(r, 1) == Approx(du_alpha(a, r)).epsilon(1e-13));
      CHECK(u->eval(r, 2) == Approx(d2u_alpha(a, r)).epsilon(1e-13));
    }
    CHECK(u->eval(0.0, 1) == 0.0);
    CHECK(u->eval(0.0, 3) == 0.0);
  }
}

TEST_CASE("higher r-derivatives agree with finite differences of lower ones") {
  const auto ctx = make_context(6);
  const auto u = catalog_sphere_family(ctx, 0.75);
  for (double r : {0.4, 1.1, 3.0}) {
    for (int k = 1; k <= 5; ++k) {
      CAPTURE(r);
      CAPTURE(k);
      CHECK(u->eval(r, k) == Approx(fd(*u, r, k, 1e-5)).epsilon(2e-6));
    }
  }
}

TEST_CASE("t-derivatives and order limits") {
  const auto ctx = make_context(4);
  const auto u = catalog_sphere_family(ctx, 1.0);
  // U(t) = ½ log(2/(1+t)): U' = −½/(1+t), U'' = ½/(1+t)².
  CHECK(u->square_radius_derivative(3.0, 1) == Approx(-0.125));
  CHECK(u->square_radius_derivative(3.0, 2) == Approx(0.5 / 16));
  CHECK_THROWS_AS(u->square_radius_derivative(1.0, u->max_order() + 1), OrderError);
  CHECK_THROWS_AS(u->eval(1.0, u->max_order() + 1), OrderError);
  CHECK_THROWS_AS(u->eval(-1.0), DomainError);
}

TEST_CASE("catalog members") {
  const auto ctx = make_context(4);
  CHECK_THROWS_AS(catalog_sphere_family(ctx, 0.0), DomainError);
  CHECK_THROWS_AS(catalog_sphere_family(ctx, 1.5), DomainError);
  CHECK_THROWS_AS(catalog_sphere_family(ctx, -0.5), DomainError);

  const auto cx = catalog_counterexample(ctx);
  for (double r : {0.0, 0.7, 3.0}) {
    CHECK(cx->eval(r) == Approx(std::log(2 / (1 + r * r)) + r * r).epsilon(1e-14));
    CHECK(cx->eval(r, 1) == Approx(-2 * r / (1 + r * r) + 2 * r).epsilon(1e-14));
  }
  const auto flat = constant_profile(ctx, 1.5);
  CHECK(flat->eval(7.0) == 1.5);
  CHECK(flat->eval(7.0, 2) == 0.0);
  const auto sq = square_profile(ctx);
  CHECK(sq->eval(3.0) == Approx(9.0));
  CHECK(sq->eval(3.0, 2) == Approx(2.0));
  const auto ld = catalog_log_decay(ctx, 2.0);
  CHECK(ld->eval(2.0) == Approx(-std::log(5.0)));
  CHECK(*ld->asymptotic_slope_hint() == Approx(-2.0));
}

TEST_CASE("selectors") {
  const auto ctx = make_context(4);
  CHECK(profile_from_selector(ctx, "sphere:0.5")->eval(1.0) == Approx(u_alpha(0.5, 1.0)));
  CHECK(profile_from_selector(ctx, "counterexample")->eval(2.0) == Approx(std::log(0.4) + 4));
  CHECK(profile_from_selector(ctx, "flat")->eval(2.0) == 0.0);
  CHECK(profile_from_selector(ctx, "logdecay:3")->eval(1.0) == Approx(-1.5 * std::log(2.0)));
  CHECK_THROWS_AS(profile_from_selector(ctx, "sphere:abc"), DomainError);
  CHECK_THROWS_AS(profile_from_selector(ctx, "sphere:2"), DomainError);
  CHECK_THROWS_AS(profile_from_selector(ctx, "nonsense"), DomainError);
  CHECK_THROWS_AS(profile_from_selector(ctx, "file:/nonexistent/profile.csv"), DomainError);
}

TEST_CASE("numeric profile reproduces a sampled closed form") {
  const auto ctx = make_context(4);
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 400; ++i) {
    const double r = 20.0 * i / 400;
    samples.emplace_back(r, u_alpha(0.5, r));
  }
  const auto u = numeric_profile(ctx, samples);
  CHECK(u->provenance() == RadialProfile::Provenance::numeric_differentiated);
  CHECK(u->max_order() >= ctx.n);
  for (double r : {0.0, 0.33, 1.7, 9.1, 19.3}) {
    CAPTURE(r);
    CHECK(u->eval(r) == Approx(u_alpha(0.5, r)).epsilon(1e-8));
    CHECK(u->eval(r, 1) == Approx(du_alpha(0.5, r)).epsilon(1e-5).scale(1.0));
    CHECK(u->eval(r, 2) == Approx(d2u_alpha(0.5, r)).epsilon(1e-4).scale(1.0));
  }
  // logarithmic continuation: slope hint r u'(r) at the last sample
  REQUIRE(u->asymptotic_slope_hint().has_value());
  CHECK(*u->asymptotic_slope_hint() == Approx(-0.5 * 400.0 / 401.0).epsilon(1e-4));
  const double s = *u->asymptotic_slope_hint();
  CHECK(u->eval(200.0) == Approx(u->eval(20.0) + s * std::log(10.0)).epsilon(1e-8));

  std::vector<std::pair<double, double>> few(samples.begin(), samples.begin() + 5);
  CHECK_THROWS_AS(numeric_profile(ctx, few), DomainError);
  auto unsorted = samples;
  std::swap(unsorted[3], unsorted[4]);
  CHECK_THROWS_AS(numeric_profile(ctx, unsorted), DomainError);
}

TEST_CASE("CSV profile loading") {
  const auto ctx = make_context(4);
  const auto path = std::filesystem::temp_directory_path() / "qcurv_profile_test.csv";
  {
    std::ofstream out(path);
    out << "r,u\n";
    for (int i = 0; i <= 200; ++i) {
      const double r = 10.0 * i / 200;
      char line[64];
      std::snprintf(line, sizeof line, "%.17g,%.17g\n", r, u_alpha(1.0, r));
      out << line;
    }
  }
  const auto u = load_profile_csv(ctx, path.string());
  CHECK(u->eval(2.345) == Approx(u_alpha(1.0, 2.345)).epsilon(1e-7));
  const auto v = profile_from_selector(ctx, "file:" + path.string());
  CHECK(v->eval(2.345) == Approx(u->eval(2.345)));
  std::filesystem::remove(path);
}

TEST_CASE("perturbed field") {
  const auto ctx = make_context(4);
  const auto base = catalog_sphere_family(ctx, 0.5);
  CHECK_THROWS_AS(make_perturbed(base, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(make_perturbed(base, 0.1, -1.0), DomainError);
  const auto field = make_perturbed(base, 0.1, 1.0);
  CHECK(field.envelope(0.0) == 0.0);
  for (double r : {10.0, 100.0, 1000.0}) CHECK(field.envelope(r) * r == Approx(0.1).epsilon(1.0 / (r * r)));
  const std::vector<double> x{3.0, 0.0, 4.0, 0.0};
  CHECK(field(x) == Approx(base->eval(5.0) + field.envelope(5.0) * 0.6).epsilon(1e-14));
  const std::vector<double> y{0.0, 2.0, 0.0, 0.0};
  CHECK(field(y) == Approx(base->eval(2.0)).epsilon(1e-15));
  const std::vector<double> origin(4, 0.0);
  CHECK(field(origin) == Approx(base->eval(0.0)));
}
