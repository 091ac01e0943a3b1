#include "qcurv/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcurv/errors.hpp"

namespace qcurv {

namespace {

class LaplacianProfile final : public RadialProfile {
 public:
  LaplacianProfile(int n, ProfilePtr base, double scale)
      : RadialProfile("laplacian(" + base->name() + ")", base->max_order() - 2,
                      base->provenance(), std::nullopt),
        n_(n),
        base_(std::move(base)),
        scale_(scale) {}

 private:
  // (L U)^{(j)} = 4t U^{(j+2)} + (4j + 2n) U^{(j+1)}
  double t_derivative(double t, int order) const override {
    const double first = base_->square_radius_derivative(t, order + 1);
    const double second = t == 0.0 ? 0.0 : 4.0 * t * base_->square_radius_derivative(t, order + 2);
    return scale_ * (second + (4.0 * order + 2.0 * n_) * first);
  }

  int n_;
  ProfilePtr base_;
  double scale_;
};

constexpr int kTailPoints = 5;
constexpr double kStrictDecrease = 1e-3;
constexpr double kStableSpread = 5e-2;

}  // namespace

ProfilePtr radial_laplacian(const DimensionContext& ctx, ProfilePtr u) {
  if (u->max_order() < 2) {
    throw OrderError("radial Laplacian needs derivatives to order 2; '" + u->name() +
                     "' has " + std::to_string(u->max_order()));
  }
  if (auto exact = u->exact_laplacian(ctx.n, 1.0)) return exact;
  return std::make_shared<LaplacianProfile>(ctx.n, std::move(u), 1.0);
}

ProfilePtr polyharmonic(const DimensionContext& ctx, ProfilePtr u, int k) {
  if (k < 1 || k > ctx.m) throw DomainError("polyharmonic order must be in 1..m");
  if (u->max_order() < 2 * k) {
    throw OrderError("(−Δ)^" + std::to_string(k) + " needs derivatives to order " +
                     std::to_string(2 * k) + "; '" + u->name() + "' has " +
                     std::to_string(u->max_order()));
  }
  ProfilePtr current = std::move(u);
  for (int i = 0; i < k; ++i) {
    auto exact = current->exact_laplacian(ctx.n, -1.0);
    current = exact ? exact : std::make_shared<LaplacianProfile>(ctx.n, std::move(current), -1.0);
  }
  return current;
}

RadialFunction q_curvature(const DimensionContext& ctx, ProfilePtr u) {
  auto top = polyharmonic(ctx, u, ctx.m);
  const int n = ctx.n;
  return [top, u, n](double r) { return 0.5 * top->eval(r) * std::exp(-n * u->eval(r)); };
}

RadialFunction log_q_curvature(const DimensionContext& ctx, ProfilePtr u) {
  auto top = polyharmonic(ctx, u, ctx.m);
  const int n = ctx.n;
  return [top, u, n](double r) {
    const double p = top->eval(r);
    if (!(p > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(0.5 * p) - n * u->eval(r);
  };
}

CurvatureDensity density(const DimensionContext& ctx, ProfilePtr u, const QuadratureSpec& spec) {
  auto top = polyharmonic(ctx, std::move(u), ctx.m);
  CurvatureDensity d;
  d.f = [top](double r) { return 0.5 * top->eval(r); };
  d.decay = DecayModel::power(2.0 * ctx.n);
  // Sign scan on a geometric grid out to the tail cut.
  double last_negative = 0.0;
  if (d.f(0.0) < 0.0) last_negative = 0.0;
  const int samples = 400;
  for (int i = 0; i <= samples; ++i) {
    const double r = spec.tail_cut * std::pow(1e-4, 1.0 - static_cast<double>(i) / samples);
    if (d.f(r) < 0.0) last_negative = r;
  }
  d.positive_beyond = last_negative;
  return d;
}

CurvatureDensity zero_density(const DimensionContext& ctx) {
  CurvatureDensity d;
  d.f = [](double) { return 0.0; };
  d.decay = DecayModel::power(2.0 * ctx.n);
  return d;
}

double total_alpha(const DimensionContext& ctx, const CurvatureDensity& d,
                   const QuadratureSpec& spec) {
  const int power = ctx.n - 1;
  const RadialFn integrand = [&](double r) { return d.f(r) * std::pow(r, power); };
  DecayModel tail = d.decay;
  if (tail.kind == DecayModel::Kind::power) tail.rate -= power;
  // Relative tolerance only: densities can be tiny in absolute terms.
  QuadratureSpec local = spec;
  local.abs_tol = std::min(spec.abs_tol, 1e-14);
  const auto res = integrate_halfline(integrand, 0.0, local, tail);
  return ctx.omega_n_minus_1 * res.value / ctx.c_n;
}

RadialFunction scalar_curvature(const DimensionContext& ctx, ProfilePtr u) {
  auto lap = radial_laplacian(ctx, u);
  const int n = ctx.n;
  return [u, lap, n](double r) {
    const double du = u->eval(r, 1);
    return std::exp(-2.0 * u->eval(r)) * (n - 1) * (-2.0 * lap->eval(r) - (n - 2) * du * du);
  };
}

std::string to_string(DecayVerdict verdict) {
  switch (verdict) {
    case DecayVerdict::satisfies:
      return "satisfies";
    case DecayVerdict::violates:
      return "violates";
    case DecayVerdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

DecayMarginReport decay_margin(const DimensionContext& ctx, ProfilePtr u,
                               std::span<const double> r_grid) {
  if (r_grid.size() < static_cast<std::size_t>(kTailPoints)) {
    throw DomainError("decay_margin needs at least 5 grid points");
  }
  const auto log_q = log_q_curvature(ctx, u);
  DecayMarginReport report;
  const std::size_t tail_start = r_grid.size() - kTailPoints;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    if (!(r > 0.0)) throw DomainError("decay_margin grid radii must be > 0");
    const double lq = log_q(r);
    if (std::isnan(lq)) {
      if (i >= tail_start) {
        throw SignError("Q_g <= 0 at r = " + std::to_string(r) + " on the tail of the grid");
      }
      continue;
    }
    report.rows.emplace_back(r, -lq / (r * r));
  }
  std::vector<double> eps;
  for (std::size_t i = report.rows.size() - kTailPoints; i < report.rows.size(); ++i) {
    eps.push_back(report.rows[i].second);
  }
  report.tail_value = eps.back();
  const bool positive = std::all_of(eps.begin(), eps.end(), [](double e) { return e > 0.0; });
  bool decreasing = positive;
  for (std::size_t i = 1; i < eps.size() && decreasing; ++i) {
    decreasing = eps[i] < eps[i - 1] * (1.0 - kStrictDecrease);
  }
  const auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
  const bool stable = positive && (*hi - *lo) <= kStableSpread * std::abs(eps.back());
  // ε <= 0 means Q >= 1 on the tail, which satisfies the hypothesis outright.
  const bool bounded_below = std::all_of(eps.begin(), eps.end(), [](double e) { return e <= 0.0; });
  if (decreasing || bounded_below) {
    report.verdict = DecayVerdict::satisfies;
  } else if (stable) {
    report.verdict = DecayVerdict::violates;
  } else {
    report.verdict = DecayVerdict::indeterminate;
  }
  return report;
}

}  // namespace qcurv
