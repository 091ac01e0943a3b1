#include "qcurv/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qcurv/errors.hpp"
#include "qcurv/parallel.hpp"

namespace qcurv {

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double count = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

void require_increasing(std::span<const double> r_grid, std::size_t minimum, const char* what) {
  if (r_grid.size() < minimum) throw DomainError(std::string(what) + ": grid too short");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
      throw DomainError(std::string(what) + ": radii must be positive and increasing");
    }
  }
}

using Point = std::array<double, 4>;

double discrete_laplacian(const std::function<double(const Point&)>& g, const Point& x, double h) {
  double sum = -8.0 * g(x);
  for (int i = 0; i < 4; ++i) {
    Point p = x;
    p[i] += h;
    sum += g(p);
    p[i] = x[i] - h;
    sum += g(p);
  }
  return sum / (h * h);
}

// Δ² at x by nesting the 9-point Laplacian, Richardson over h and h/2.
double bilaplacian(const std::function<double(const Point&)>& g, const Point& x, double h) {
  const auto at = [&](double step) {
    return discrete_laplacian([&](const Point& p) { return discrete_laplacian(g, p, step); }, x,
                              step);
  };
  const double coarse = at(h);
  const double fine = at(0.5 * h);
  const double value = (4.0 * fine - coarse) / 3.0;
  if (!std::isfinite(value)) throw DomainError("bilaplacian stencil produced a non-finite value");
  return value;
}

}  // namespace

AsymptoticsReport slope_estimate(const RadialProfile& u, std::span<const double> r_grid) {
  require_increasing(r_grid, 4, "slope_estimate");
  if (r_grid.back() < 100.0 * r_grid.front()) {
    throw DomainError("slope_estimate: grid must span at least two decades");
  }
  std::vector<double> x, y;
  for (double r : r_grid) {
    x.push_back(std::log(r));
    y.push_back(u.eval(r));
  }
  AsymptoticsReport report;
  const LineFit fit = fit_line(x, y);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
  }
  report.slope_residual = worst / std::log(r_grid.back());
  report.non_logarithmic = !(report.slope_residual < 0.05) || !std::isfinite(report.slope);
  report.grid.assign(r_grid.begin(), r_grid.end());
  for (double r : r_grid) report.ru_prime_tail.emplace_back(r, r * u.eval(r, 1));
  return report;
}

RadialLimitReport radial_limit_check(const DimensionContext& ctx, const RadialProfile& u,
                                     const CurvatureDensity& d, std::span<const double> r_grid,
                                     const QuadratureSpec& spec) {
  require_increasing(r_grid, 3, "radial_limit_check");
  RadialLimitReport report;
  for (double r : r_grid) report.rows.emplace_back(r, r * u.eval(r, 1));
  const auto richardson = [&](std::size_t i) {
    const auto [r0, y0] = report.rows[i];
    const auto [r1, y1] = report.rows[i + 1];
    return (r1 * r1 * y1 - r0 * r0 * y0) / (r1 * r1 - r0 * r0);
  };
  const std::size_t last = report.rows.size() - 2;
  const double estimate = richardson(last);
  const double previous = richardson(last - 1);
  const double spread = std::abs(report.rows.back().second - report.rows[last].second);
  if (std::isfinite(estimate) && std::abs(estimate - previous) <= std::max(0.1 * spread, 1e-12)) {
    report.limit = estimate;
    report.limit_error = std::abs(estimate - previous);
  } else {
    report.limit = report.rows.back().second;
    report.limit_error = spread;
    report.low_confidence = true;
  }
  report.alpha = total_alpha(ctx, d, spec);
  report.gap = std::abs(report.limit + report.alpha);
  return report;
}

BoundsReport bounds_check(const RadialProfile& u, double alpha, double eps,
                          std::span<const double> r_grid) {
  require_increasing(r_grid, 4, "bounds_check");
  if (!(eps > 0.0)) throw DomainError("bounds_check: eps must be positive");
  std::vector<double> x, upper, lower;
  for (double r : r_grid) {
    const double value = u.eval(r);
    x.push_back(std::log(r));
    upper.push_back(value + (alpha - eps) * std::log(r));
    lower.push_back(-(value + alpha * std::log(r)));
  }
  BoundsReport report;
  for (std::size_t i = 0; i < x.size(); ++i) {
    report.upper_constant = std::max(report.upper_constant, upper[i]);
    report.lower_constant = std::max(report.lower_constant, lower[i]);
  }
  const std::size_t half = x.size() / 2;
  const std::span<const double> xs(x.data() + half, x.size() - half);
  report.upper_growth = fit_line(xs, std::span<const double>(upper.data() + half, xs.size())).slope;
  report.lower_growth = fit_line(xs, std::span<const double>(lower.data() + half, xs.size())).slope;
  report.ok = std::isfinite(report.upper_constant) && std::isfinite(report.lower_constant) &&
              report.upper_growth <= 0.5 * eps && report.lower_growth <= 0.5 * eps;
  return report;
}

double spherical_average(const DimensionContext& ctx, const PerturbedField& field, double r,
                         const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw DomainError("spherical_average requires r > 0");
  // Only the non-radial part goes through the rule; the base is added exactly,
  // which keeps summation roundoff proportional to the perturbation.
  const double base = field.base->eval(r);
  std::vector<double> point(static_cast<std::size_t>(ctx.n));
  return base + sphere_quadrature(
                    ctx,
                    [&](std::span<const double> theta) {
                      for (std::size_t i = 0; i < point.size(); ++i) point[i] = r * theta[i];
                      return field(point) - base;
                    },
                    spec);
}

double spherical_average(const DimensionContext& ctx, const RadialProfile& u, double r,
                         const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw DomainError("spherical_average requires r > 0");
  const double value = u.eval(r);
  return sphere_quadrature(ctx, [value](std::span<const double>) { return value; }, spec);
}

double exp_average_ratio(const DimensionContext& ctx, const PerturbedField& field, double k,
                         double r, const QuadratureSpec& spec) {
  if (!(k > 0.0)) throw DomainError("exp_average_ratio requires k > 0");
  const double mean = spherical_average(ctx, field, r, spec);
  std::vector<double> point(static_cast<std::size_t>(ctx.n));
  return sphere_quadrature(
      ctx,
      [&](std::span<const double> theta) {
        for (std::size_t i = 0; i < point.size(); ++i) point[i] = r * theta[i];
        return std::exp(k * (field(point) - mean));
      },
      spec);
}

std::pair<double, double> averaged_alpha_invariance(const DimensionContext& ctx,
                                                    const PerturbedField& field,
                                                    const QuadratureSpec& spec) {
  if (ctx.n != 4) throw DomainError("averaged_alpha_invariance is implemented for n = 4 only");
  QuadratureSpec local = spec;
  local.sphere_nodes = std::min(spec.sphere_nodes, 8);
  constexpr double h0 = 0.01;
  constexpr int radial_nodes = 64;

  const auto field_at = [&field](const Point& p) { return field(std::span<const double>(p)); };
  const auto average_at = [&](const Point& p) {
    const double radius = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    if (radius == 0.0) return field_at(p);
    return spherical_average(ctx, field, radius, local);
  };

  // Both sides share one radial rule: Gauss–Legendre in t with r = t/(1−t).
  // Adaptive refinement would chase stencil rounding noise.
  std::vector<double> nodes, weights;
  gauss_legendre(radial_nodes, nodes, weights);
  const auto sides = parallel_map<std::pair<double, double>>(nodes.size(), [&](std::size_t i) {
    const double t = 0.5 * (nodes[i] + 1.0);
    const double r = t / (1.0 - t);
    const double jacobian = 0.5 * weights[i] / ((1.0 - t) * (1.0 - t));
    const double h = h0 * (1.0 + r);
    const double from_field = sphere_quadrature(
        ctx,
        [&](std::span<const double> theta) {
          const Point x{r * theta[0], r * theta[1], r * theta[2], r * theta[3]};
          return 0.5 * bilaplacian(field_at, x, h);
        },
        local);
    const double from_average = 0.5 * bilaplacian(average_at, Point{r, 0.0, 0.0, 0.0}, h);
    const double scale = jacobian * ctx.omega_n_minus_1 * r * r * r / ctx.c_n;
    return std::pair{scale * from_field, scale * from_average};
  });
  std::pair<double, double> total{0.0, 0.0};
  for (const auto& [a, b] : sides) {
    total.first += a;
    total.second += b;
  }
  return total;
}

std::vector<double> geometric_grid(double r_min, double r_max, int points_per_decade) {
  if (!(r_min > 0.0) || !(r_max > r_min) || points_per_decade < 1) {
    throw DomainError("geometric_grid requires 0 < r_min < r_max and points_per_decade >= 1");
  }
  const double decades = std::log10(r_max / r_min);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * points_per_decade - 1e-9)));
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) {
    grid.push_back(r_min * std::pow(r_max / r_min, static_cast<double>(i) / steps));
  }
  return grid;
}

}  // namespace qcurv
