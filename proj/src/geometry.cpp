#include "qcurv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcurv/asymptotics.hpp"
#include "qcurv/curvature.hpp"
#include "qcurv/errors.hpp"
#include "qcurv/parallel.hpp"

namespace qcurv {

namespace {

constexpr int kDyadicPieces = 40;
constexpr double kCompletenessBand = 0.02;

// log ∫_a^b exp(logh(s)) ds. Pieces shrink dyadically toward b, where
// exponentially growing integrands concentrate.
double log_integral(const std::function<double(double)>& logh, double a, double b,
                    const QuadratureSpec& spec) {
  if (!(b > a)) return -std::numeric_limits<double>::infinity();
  double shift = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 64; ++k) shift = std::max(shift, logh(a + (b - a) * k / 64.0));
  for (int k = 1; k <= kDyadicPieces; ++k) shift = std::max(shift, logh(b - (b - a) * std::ldexp(1.0, -k)));
  if (!std::isfinite(shift)) shift = 0.0;
  const RadialFn scaled = [&](double s) {
    const double lh = logh(s);
    return lh == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(lh - shift);
  };
  QuadratureSpec local = spec;
  local.abs_tol = 1e-300;
  double total = 0.0;
  double left = a;
  for (int k = 1; k <= kDyadicPieces; ++k) {
    const double right = b - (b - a) * std::ldexp(1.0, -k);
    if (right > left) total += integrate_interval(scaled, left, right, local).value;
    left = std::max(left, right);
  }
  if (b > left) total += integrate_interval(scaled, left, b, local).value;
  return shift + std::log(total);
}

struct LinearFit {
  double offset, amplitude, residual;
};

LinearFit fit_power(std::span<const double> x, std::span<const double> y, double q) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = std::pow(x[i], -q);
    sw += 1.0;
    sx += z;
    sy += y[i];
    sxx += z * z;
    sxy += z * y[i];
  }
  const double det = sw * sxx - sx * sx;
  LinearFit fit{sy / sw, 0.0, 0.0};
  if (det > 0.0 && std::abs(det) > 1e-300) {
    fit.amplitude = (sw * sxy - sx * sy) / det;
    fit.offset = (sy - fit.amplitude * sx) / sw;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = fit.offset + fit.amplitude * std::pow(x[i], -q) - y[i];
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(x.size()));
  return fit;
}

}  // namespace

double log_metric_sphere_area(const DimensionContext& ctx, const RadialProfile& u, double r) {
  if (!(r > 0.0)) throw DomainError("sphere area requires r > 0");
  return std::log(ctx.omega_n_minus_1) + (ctx.n - 1) * (std::log(r) + u.eval(r));
}

double metric_sphere_area(const DimensionContext& ctx, const RadialProfile& u, double r) {
  return std::exp(log_metric_sphere_area(ctx, u, r));
}

double log_metric_shell_volume(const DimensionContext& ctx, const RadialProfile& u, double r0,
                               double r1, const QuadratureSpec& spec) {
  if (!(r1 > r0) || r0 < 0.0) throw DomainError("shell volume requires 0 <= r0 < r1");
  const int n = ctx.n;
  const auto logh = [&u, n](double s) {
    if (s <= 0.0) return -std::numeric_limits<double>::infinity();
    return (n - 1) * std::log(s) + n * u.eval(s);
  };
  return std::log(ctx.omega_n_minus_1) + log_integral(logh, r0, r1, spec);
}

double metric_ball_volume(const DimensionContext& ctx, const RadialProfile& u, double r,
                          const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw DomainError("ball volume requires r > 0");
  return std::exp(log_metric_shell_volume(ctx, u, 0.0, r, spec));
}

double isoperimetric_ratio(const DimensionContext& ctx, const RadialProfile& u, double r,
                           const QuadratureSpec& spec) {
  const double n = ctx.n;
  const double log_area = log_metric_sphere_area(ctx, u, r);
  const double log_volume = log_metric_shell_volume(ctx, u, 0.0, r, spec);
  return std::exp(n / (n - 1.0) * log_area - std::log(n) -
                  std::log(ctx.omega_n_minus_1) / (n - 1.0) - log_volume);
}

DefectReport defect_extrapolate(const DimensionContext& ctx, ProfilePtr u,
                                const QuadratureSpec& spec, std::span<const double> r_grid) {
  if (r_grid.size() < 6) throw DomainError("defect_extrapolate needs at least 6 radii");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
      throw DomainError("defect_extrapolate radii must be positive and strictly increasing");
    }
  }
  const double n = ctx.n;
  DefectReport report;
  report.alpha = total_alpha(ctx, density(ctx, u, spec), spec);

  const auto ratios = parallel_map<double>(
      r_grid.size(), [&](std::size_t i) { return isoperimetric_ratio(ctx, *u, r_grid[i], spec); });
  for (std::size_t i = 0; i < r_grid.size(); ++i) report.defect_samples.emplace_back(r_grid[i], ratios[i]);

  const auto log_a = [&](double r) {
    return n / (n - 1.0) * log_metric_sphere_area(ctx, *u, r) - std::log(n) -
           std::log(ctx.omega_n_minus_1) / (n - 1.0);
  };
  const auto quotients = parallel_map<double>(r_grid.size() - 1, [&](std::size_t j) {
    const double la0 = log_a(r_grid[j]);
    const double la1 = log_a(r_grid[j + 1]);
    const double lv = log_metric_shell_volume(ctx, *u, r_grid[j], r_grid[j + 1], spec);
    return -std::expm1(la0 - la1) * std::exp(la1 - lv);
  });
  std::vector<double> mids, values;
  for (std::size_t j = 0; j < quotients.size(); ++j) {
    const double mid = std::sqrt(r_grid[j] * r_grid[j + 1]);
    report.increment_quotients.emplace_back(mid, quotients[j]);
    mids.push_back(mid);
    values.push_back(quotients[j]);
  }

  const std::size_t used = std::min<std::size_t>(5, values.size());
  const std::span<const double> x(mids.data() + mids.size() - used, used);
  const std::span<const double> y(values.data() + values.size() - used, used);
  report.fit_model = "D + a*r^-q on increment quotients dA/dV (last " + std::to_string(used) + ")";

  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double last = y.back();
  const double previous = y[y.size() - 2];
  if (*hi - *lo <= 1e-13 * std::max(1.0, std::abs(last))) {
    report.defect_extrapolated = last;
    report.fit_exponent = 0.0;
  } else {
    constexpr double q_min = 0.05, q_max = 8.0;
    constexpr int scan = 240;
    double best_q = q_min;
    double best_res = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= scan; ++i) {
      const double q = q_min * std::pow(q_max / q_min, static_cast<double>(i) / scan);
      const double res = fit_power(x, y, q).residual;
      if (res < best_res) {
        best_res = res;
        best_q = q;
      }
    }
    // Golden-section refinement in log q around the best scan point.
    const double step = std::pow(q_max / q_min, 1.0 / scan);
    double a = std::log(std::max(q_min, best_q / step));
    double b = std::log(std::min(q_max, best_q * step));
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
      const double c = b - golden * (b - a);
      const double d = a + golden * (b - a);
      if (fit_power(x, y, std::exp(c)).residual < fit_power(x, y, std::exp(d)).residual) {
        b = d;
      } else {
        a = c;
      }
    }
    best_q = std::exp(0.5 * (a + b));
    const LinearFit fit = fit_power(x, y, best_q);
    report.fit_exponent = best_q;
    report.fit_amplitude = fit.amplitude;
    report.fit_residual = fit.residual;
    const bool at_boundary = best_q <= q_min * 1.01 || best_q >= q_max * 0.99;
    if (!std::isfinite(fit.offset) || at_boundary) {
      report.low_confidence = true;
      report.defect_extrapolated = last;
      report.fallback_error = std::abs(last - previous);
    } else {
      report.defect_extrapolated = fit.offset;
    }
  }
  report.consistency_gap = std::abs((1.0 - report.alpha) - report.defect_extrapolated);
  return report;
}

std::string to_string(Completeness c) {
  switch (c) {
    case Completeness::complete:
      return "complete";
    case Completeness::incomplete:
      return "incomplete";
    case Completeness::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

CompletenessReport completeness_classify(const DimensionContext& ctx, ProfilePtr u,
                                         const QuadratureSpec& spec) {
  (void)ctx;
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(std::pow(10.0, 2.0 + i / 4.0));
  const AsymptoticsReport slope = slope_estimate(*u, grid);
  CompletenessReport report;
  report.slope = slope.slope;
  if (slope.slope > -1.0 + kCompletenessBand) {
    report.verdict = Completeness::complete;
  } else if (slope.slope < -1.0 - kCompletenessBand) {
    report.verdict = Completeness::incomplete;
  } else {
    report.verdict = Completeness::indeterminate;
  }
  const auto logh = [&u](double s) { return u->eval(s); };
  for (double radius : {10.0, 100.0, 1000.0}) {
    report.log_partial_lengths.emplace_back(radius, log_integral(logh, 0.0, radius, spec));
  }
  return report;
}

}  // namespace qcurv
