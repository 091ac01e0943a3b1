#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "qcurv/curvature.hpp"
#include "qcurv/errors.hpp"
#include "qcurv/pizzetti.hpp"
#include "qcurv/profiles.hpp"

namespace qcurv::cli {

namespace {

Check relative(std::string suite, std::string name, double got, double want, double tol) {
  const double err = std::abs(got - want) / std::max(std::abs(want), 1e-300);
  return {std::move(suite), std::move(name), err, tol, err < tol};
}

Check absolute(std::string suite, std::string name, double got, double want, double tol) {
  const double err = std::abs(got - want);
  return {std::move(suite), std::move(name), err, tol, err < tol};
}

double double_factorial(int k) {
  double out = 1.0;
  for (int i = k; i > 1; i -= 2) out *= i;
  return out;
}

void constants_suite(std::vector<Check>& out) {
  for (int n : {4, 6, 8}) {
    const auto ctx = make_context(n);
    const int m = n / 2;
    const std::string tag = "n=" + std::to_string(n) + " ";
    double factorial = 1.0;
    for (int i = 2; i < m; ++i) factorial *= i;
    const double c_closed = std::pow(2.0, n - 2) * factorial * std::pow(std::numbers::pi, m);
    out.push_back(relative("constants", tag + "c_n closed form", ctx.c_n, c_closed, 1e-14));
    out.push_back(relative("constants", tag + "c_n = omega_n q_sphere / 2", ctx.c_n,
                           0.5 * ctx.omega_n * ctx.q_sphere, 1e-14));
    out.push_back(relative("constants", tag + "|S^{n-1}|", ctx.omega_n_minus_1,
                           2.0 * std::pow(std::numbers::pi, m) / factorial, 1e-14));
    for (int i = 1; i < m; ++i) {
      const double closed = static_cast<double>(n) / (n + 2 * i) * double_factorial(n - 2) /
                            (double_factorial(2 * i) * double_factorial(2 * i + n - 2));
      out.push_back(relative("constants", tag + "pizzetti[" + std::to_string(i) + "]",
                             ctx.pizzetti[static_cast<std::size_t>(i)], closed, 1e-14));
    }
    out.push_back(absolute("constants", tag + "d_1", ctx.d(1), -(n - 2.0), 1e-15));
  }
}

void quadrature_suite(std::vector<Check>& out, const QuadratureSpec& spec) {
  const double pi = std::numbers::pi;
  out.push_back(absolute("quadrature", "int_0^pi sin",
                         integrate_interval([](double x) { return std::sin(x); }, 0.0, pi, spec).value,
                         2.0, 1e-10));
  const double a = 0.3;
  out.push_back(absolute(
      "quadrature", "int_0^1 log|s-0.3|",
      integrate_log_singular([a](double s) { return std::log(std::abs(s - a)); }, a, 0.0, 1.0, spec).value,
      0.7 * std::log(0.7) + 0.3 * std::log(0.3) - 1.0, 1e-9));
  out.push_back(absolute("quadrature", "int_0^inf (1+r)^-3",
                         integrate_halfline([](double r) { return std::pow(1.0 + r, -3.0); }, 0.0,
                                            spec, DecayModel::power(3.0))
                             .value,
                         0.5, 1e-9));
  out.push_back(absolute("quadrature", "int_0^inf exp(-r^2)",
                         integrate_halfline([](double r) { return std::exp(-r * r); }, 0.0, spec,
                                            DecayModel::gaussian(1.0))
                             .value,
                         0.5 * std::sqrt(pi), 1e-9));
  for (int n : {4, 6}) {
    const auto ctx = make_context(n);
    const std::string tag = "n=" + std::to_string(n) + " ";
    out.push_back(absolute("quadrature", tag + "sphere mean theta1^2",
                           sphere_quadrature(ctx, [](std::span<const double> t) { return t[0] * t[0]; }, spec),
                           1.0 / n, 1e-12));
    // The n >= 6 rule is only exact through degree 3.
    if (n == 4) {
      out.push_back(absolute("quadrature", tag + "sphere mean theta1^4",
                             sphere_quadrature(ctx, [](std::span<const double> t) { return std::pow(t[0], 4); }, spec),
                             3.0 / (n * (n + 2.0)), 1e-12));
    }
  }
}

void pizzetti_suite(std::vector<Check>& out, const QuadratureSpec& spec) {
  for (int n : {4, 6}) {
    const auto ctx = make_context(n);
    std::vector<double> x0(static_cast<std::size_t>(n), 0.3);
    x0[1] = -0.7;
    for (const auto& h : pizzetti_generators(ctx)) {
      const double defect = pizzetti_verify(ctx, h, x0, 1.5, spec);
      out.push_back({"pizzetti", "n=" + std::to_string(n) + " " + h.name, defect, 1e-8, defect < 1e-8});
    }
  }
}

void layer_cake_suite(std::vector<Check>& out, const QuadratureSpec& spec) {
  for (int n : {4, 6}) {
    const auto ctx = make_context(n);
    const DirectionFn one = [](std::span<const double>) { return 1.0; };
    const DirectionFn square = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    };
    for (double radius : {1.0, 2.0}) {
      const std::string tag = "n=" + std::to_string(n) + " R=" + std::to_string(static_cast<int>(radius)) + " ";
      const double closed = radius * radius / (2.0 * n);
      out.push_back(absolute("layer-cake", tag + "u=1 lhs", layer_cake_lhs(ctx, one, radius, spec), closed, 1e-8));
      out.push_back(absolute("layer-cake", tag + "u=1 rhs", layer_cake_rhs(ctx, one, radius, spec), closed, 1e-8));
      out.push_back(absolute("layer-cake", tag + "u=|x|^2 lhs-rhs", layer_cake_lhs(ctx, square, radius, spec),
                             layer_cake_rhs(ctx, square, radius, spec), 1e-8));
    }
  }
}

void curvature_suite(std::vector<Check>& out, const QuadratureSpec& spec) {
  for (int n : {4, 6}) {
    const auto ctx = make_context(n);
    for (double alpha : {0.25, 0.5, 1.0}) {
      const auto u = catalog_sphere_family(ctx, alpha);
      out.push_back(relative("curvature", "n=" + std::to_string(n) + " alpha(sphere:" + std::to_string(alpha).substr(0, 4) + ")",
                             total_alpha(ctx, density(ctx, u, spec), spec), alpha, 1e-6));
    }
    const auto cx = catalog_counterexample(ctx);
    out.push_back(relative("curvature", "n=" + std::to_string(n) + " alpha(counterexample)",
                           total_alpha(ctx, density(ctx, cx, spec), spec), 2.0, 1e-6));
  }
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"constants", "quadrature", "pizzetti", "layer-cake", "curvature", "all"};
}

std::vector<Check> run_suite(const std::string& suite, const QuadratureSpec& spec) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw DomainError("unknown suite '" + suite + "'");
  }
  QuadratureSpec local = spec;
  local.sphere_nodes = std::min(spec.sphere_nodes, 16);
  std::vector<Check> out;
  const bool all = suite == "all";
  if (all || suite == "constants") constants_suite(out);
  if (all || suite == "quadrature") quadrature_suite(out, local);
  if (all || suite == "pizzetti") pizzetti_suite(out, local);
  if (all || suite == "layer-cake") layer_cake_suite(out, local);
  if (all || suite == "curvature") curvature_suite(out, local);
  return out;
}

}  // namespace qcurv::cli
