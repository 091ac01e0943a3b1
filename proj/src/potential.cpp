#include "qcurv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcurv/errors.hpp"
#include "qcurv/parallel.hpp"

namespace qcurv {

namespace {

// |θ − ρ e₁|² for the polar angle φ, without cancellation near ρ = 1, φ = 0.
double unit_distance_sq(double rho, double phi) {
  const double sh = std::sin(0.5 * phi);
  return (1.0 - rho) * (1.0 - rho) + 4.0 * rho * sh * sh;
}

QuadratureSpec inner_spec(const QuadratureSpec& spec) {
  QuadratureSpec inner = spec;
  inner.rel_tol = std::min(spec.rel_tol, 1e-11);
  inner.abs_tol = std::min(spec.abs_tol, 1e-14);
  return inner;
}

// M(r, s) − log s.
double log_kernel_offset(const DimensionContext& ctx, double r, double s,
                         const QuadratureSpec& inner) {
  const double big = std::max(r, s);
  const double rho = std::min(r, s) / big;
  const auto half_log = [rho](double phi) {
    const double x = rho * (rho - 2.0 * std::cos(phi));
    if (std::abs(x) < 0.5) return 0.5 * std::log1p(x);
    return 0.5 * std::log(unit_distance_sq(rho, phi));
  };
  const double mean = rho == 0.0 ? 0.0 : polar_mean(ctx, half_log, std::numbers::pi, inner).value;
  return std::log(big / s) + mean;
}

// Mean over θ of log(1/|r e₁ − s θ|) restricted to |r e₁ − s θ| < 1.
double unit_ball_log_mean(const DimensionContext& ctx, double r, double s,
                          const QuadratureSpec& inner) {
  if (r == 0.0) return s < 1.0 ? -std::log(s) : 0.0;
  // sin²(φ_max/2) = (1 − (r−s)²) / (4rs), free of the cancellation in the cosine form.
  const double half_sin_sq = (1.0 - (r - s) * (r - s)) / (4.0 * r * s);
  if (half_sin_sq <= 0.0) return 0.0;
  const double phi_max = half_sin_sq >= 1.0 ? std::numbers::pi : 2.0 * std::asin(std::sqrt(half_sin_sq));
  const auto integrand = [r, s](double phi) {
    const double sh = std::sin(0.5 * phi);
    const double dist_sq = (r - s) * (r - s) + 4.0 * r * s * sh * sh;
    return -0.5 * std::log(dist_sq);
  };
  return polar_mean(ctx, integrand, phi_max, inner).value;
}

// ∫ over [a, b] split at interior breakpoints, log-singular mapping at s0.
double piecewise_log_singular(const RadialFn& g, double s0, std::vector<double> points,
                              const QuadratureSpec& spec) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += integrate_log_singular(g, s0, points[i], points[i + 1], spec).value;
  }
  return total;
}

}  // namespace

double potential_v(const DimensionContext& ctx, const CurvatureDensity& d, double r,
                   const QuadratureSpec& spec) {
  if (r < 0.0) throw DomainError("potential_v requires r >= 0");
  if (r == 0.0) return 0.0;
  const QuadratureSpec inner = inner_spec(spec);
  const int power = ctx.n - 1;
  const RadialFn integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double fs = d.f(s);
    if (fs == 0.0) return 0.0;
    return std::pow(s, power) * fs * log_kernel_offset(ctx, r, s, inner);
  };
  QuadratureSpec outer = spec;
  outer.abs_tol = std::min(spec.abs_tol, 1e-12);
  double total = integrate_log_singular(integrand, r, 0.0, 2.0 * r, outer).value;
  DecayModel tail = d.decay;
  // M(r,s) − log s = O(r²/s²) for s ≫ r.
  if (tail.kind == DecayModel::Kind::power) tail.rate = tail.rate - power + 2.0;
  total += integrate_halfline(integrand, 2.0 * r, outer, tail).value;
  return ctx.omega_n_minus_1 * total / ctx.c_n;
}

double bad_term_b(const DimensionContext& ctx, const CurvatureDensity& d, double r,
                  const QuadratureSpec& spec) {
  if (r < 0.0) throw DomainError("bad_term_b requires r >= 0");
  // b is tiny far out, so both levels use relative tolerances only.
  QuadratureSpec inner = inner_spec(spec);
  inner.abs_tol = 1e-300;
  QuadratureSpec outer = spec;
  outer.abs_tol = 1e-300;
  const int power = ctx.n - 1;
  const RadialFn integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double fs = d.f(s);
    if (fs == 0.0) return 0.0;
    return std::pow(s, power) * fs * unit_ball_log_mean(ctx, r, s, inner);
  };
  std::vector<double> points{std::max(0.0, r - 1.0), r, r + 1.0};
  if (r < 1.0) points.push_back(1.0 - r);
  const double total = piecewise_log_singular(integrand, r, points, outer);
  return ctx.omega_n_minus_1 * total / ctx.c_n;
}

double riesz_sphere_mean(const DimensionContext& ctx, int k, double r, double s,
                         const QuadratureSpec& spec) {
  if (r < 0.0 || s < 0.0) throw DomainError("riesz_sphere_mean requires r, s >= 0");
  const double big = std::max(r, s);
  if (big == 0.0) throw DomainError("riesz_sphere_mean undefined at r = s = 0");
  const double rho = std::min(r, s) / big;
  const double scale = std::pow(big, -2.0 * k);
  if (rho == 0.0) return scale;
  const auto integrand = [rho, k](double phi) { return std::pow(unit_distance_sq(rho, phi), -k); };
  return scale * polar_mean(ctx, integrand, std::numbers::pi, inner_spec(spec)).value;
}

double iterated_laplacian_v(const DimensionContext& ctx, const CurvatureDensity& d, int k,
                            double r, const QuadratureSpec& spec) {
  if (k < 1 || k > ctx.m - 1) {
    throw DomainError("iterated_laplacian_v needs 1 <= k <= m-1, got k = " + std::to_string(k));
  }
  if (r < 0.0) throw DomainError("iterated_laplacian_v requires r >= 0");
  const int power = ctx.n - 1;
  QuadratureSpec outer = spec;
  outer.abs_tol = std::min(spec.abs_tol, 1e-12);
  const RadialFn integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double fs = d.f(s);
    if (fs == 0.0) return 0.0;
    return std::pow(s, power) * fs * riesz_sphere_mean(ctx, k, r, s, spec);
  };
  DecayModel tail = d.decay;
  if (tail.kind == DecayModel::Kind::power) tail.rate = tail.rate - power + 2.0 * k;
  double total = 0.0;
  if (r == 0.0) {
    total = integrate_halfline(integrand, 0.0, outer, tail).value;
  } else {
    total = integrate_log_singular(integrand, r, 0.0, 2.0 * r, outer).value +
            integrate_halfline(integrand, 2.0 * r, outer, tail).value;
  }
  return ctx.d(k) * ctx.omega_n_minus_1 * total / ctx.c_n;
}

PotentialReport normality_residual(const DimensionContext& ctx, ProfilePtr u,
                                   const QuadratureSpec& spec, std::span<const double> r_grid) {
  const CurvatureDensity d = density(ctx, u, spec);
  PotentialReport report;
  report.alpha = total_alpha(ctx, d, spec);
  report.constant_estimate = u->eval(0.0) + potential_v(ctx, d, 0.0, spec);
  const auto v = parallel_map<double>(r_grid.size(),
                                      [&](std::size_t i) { return potential_v(ctx, d, r_grid[i], spec); });
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    report.v_values.emplace_back(r_grid[i], v[i]);
    report.residual_sup =
        std::max(report.residual_sup, std::abs(u->eval(r_grid[i]) + v[i] - report.constant_estimate));
  }
  return report;
}

PotentialReport bound_margins(const DimensionContext& ctx, ProfilePtr u, double eps,
                              const QuadratureSpec& spec, std::span<const double> r_grid) {
  if (!(eps > 0.0)) throw DomainError("bound_margins requires eps > 0");
  PotentialReport report = normality_residual(ctx, u, spec, r_grid);
  report.eps = eps;
  const CurvatureDensity d = density(ctx, u, spec);
  const auto b = parallel_map<double>(r_grid.size(),
                                      [&](std::size_t i) { return bad_term_b(ctx, d, r_grid[i], spec); });
  const double alpha = report.alpha;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    const double v = report.v_values[i].second;
    report.b_values.emplace_back(r, b[i]);
    if (r <= 1.0) continue;
    const double upper = v - alpha * std::log(r);
    report.upper_margin = report.upper_margin ? std::max(*report.upper_margin, upper) : upper;
    report.lower_check.emplace_back(r, v + b[i] - (alpha - eps) * std::log(r));
  }
  return report;
}

}  // namespace qcurv
