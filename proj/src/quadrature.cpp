#include "qcurv/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "qcurv/errors.hpp"

namespace qcurv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

struct Gk21Estimate {
  double value, error, abs_value;
};

Gk21Estimate gk21(const RadialFn& g, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[21];
  fv[0] = g(center);
  for (std::size_t i = 1; i < 11; ++i) {
    const double dx = half * xk[i];
    fv[2 * i - 1] = g(center - dx);
    fv[2 * i] = g(center + dx);
  }
  for (double f : fv) {
    if (!std::isfinite(f)) throw DomainError("integrand is not finite on the interval");
  }

  double resk = wk[0] * fv[0];
  double resg = 0.0;
  double resabs = wk[0] * std::abs(fv[0]);
  for (std::size_t i = 1; i < 11; ++i) {
    const double pair = fv[2 * i - 1] + fv[2 * i];
    resk += wk[i] * pair;
    resabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    if (i % 2 == 1) resg += wg[(i - 1) / 2] * pair;
  }
  const double mean = 0.5 * resk;
  double resasc = wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < 11; ++i) {
    resasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  }

  resk *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {resk, err, resabs};
}

double erfcx_large_safe(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  const double inv2 = 1.0 / (x * x);
  return (1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2) / (x * std::sqrt(std::numbers::pi));
}

double model_tail(const RadialFn& g, double cut, DecayModel decay) {
  const double g_cut = g(cut);
  if (!std::isfinite(g_cut)) throw TailError("integrand not finite at the tail cut", INFINITY);
  switch (decay.kind) {
    case DecayModel::Kind::power:
      return g_cut * cut / (decay.rate - 1.0);
    case DecayModel::Kind::exponential:
      return g_cut / decay.rate;
    case DecayModel::Kind::gaussian: {
      const double s = std::sqrt(decay.rate);
      return g_cut * 0.5 * std::sqrt(std::numbers::pi) / s * erfcx_large_safe(s * cut);
    }
  }
  return 0.0;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be > 0");
  if (max_subdivisions < 8) throw DomainError("max_subdivisions must be >= 8");
  if (!(tail_cut > 0.0)) throw DomainError("tail_cut must be > 0");
  if (sphere_nodes < 2) throw DomainError("sphere_nodes must be >= 2");
}

QuadratureResult integrate_interval(const RadialFn& g, double a, double b,
                                    const QuadratureSpec& spec) {
  if (!(a < b)) {
    if (a == b) return {};
    throw DomainError("integrate_interval requires a < b");
  }
  std::priority_queue<Segment> heap;
  const auto first = gk21(g, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value;
  double total_error = first.error;
  int subdivisions = 0;

  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };

  while (total_error > tolerance()) {
    if (subdivisions >= spec.max_subdivisions) {
      throw ConvergenceError("adaptive quadrature did not converge within " +
                                 std::to_string(spec.max_subdivisions) + " subdivisions",
                             total, total_error);
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw ConvergenceError("adaptive quadrature reached machine resolution", total, total_error);
    }
    heap.pop();
    const auto left = gk21(g, worst.a, mid);
    const auto right = gk21(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    ++subdivisions;
    // Recompute sums periodically to keep incremental drift out of the estimate.
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, total_error, subdivisions, 0.0};
}

QuadratureResult integrate_halfline(const RadialFn& g, double a, const QuadratureSpec& spec,
                                    DecayModel decay) {
  if (decay.kind == DecayModel::Kind::power && !(decay.rate > 1.0)) {
    throw TailError("power decay r^-p with p <= 1 is not integrable", INFINITY);
  }
  if (!(decay.rate > 0.0)) throw TailError("decay rate must be positive", INFINITY);

  double cut = a + spec.tail_cut;
  auto body = integrate_interval(g, a, cut, spec);
  constexpr int kMaxDoublings = 30;
  for (int attempt = 0;; ++attempt) {
    const double tail = model_tail(g, cut, decay);
    const double total = body.value + tail;
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (std::abs(tail) <= tol) {
      return {total, body.error + std::abs(tail), body.subdivisions, std::abs(tail)};
    }
    if (attempt == kMaxDoublings) {
      throw TailError("tail estimate " + std::to_string(std::abs(tail)) +
                          " exceeds tolerance; integrand does not follow the declared decay",
                      std::abs(tail));
    }
    const double next = a + 2.0 * (cut - a);
    const auto extra = integrate_interval(g, cut, next, spec);
    body.value += extra.value;
    body.error += extra.error;
    body.subdivisions += extra.subdivisions;
    cut = next;
  }
}

QuadratureResult integrate_log_singular(const RadialFn& g, double s0, double a, double b,
                                        const QuadratureSpec& spec) {
  if (!(a < b)) throw DomainError("integrate_log_singular requires a < b");
  if (s0 < a || s0 > b) return integrate_interval(g, a, b, spec);

  // Near τ = 0 the mapped node can round onto s0 itself; the true contribution
  // there is τ·log τ → 0.
  const double tiny = 16.0 * kEps * (std::abs(s0) + 1.0);
  auto side = [&](double sign, double length) -> QuadratureResult {
    if (length <= 0.0) return {};
    const RadialFn mapped = [&, sign](double tau) {
      const double value = g(s0 + sign * tau * tau);
      if (!std::isfinite(value) && tau * tau <= tiny) return 0.0;
      return 2.0 * tau * value;
    };
    QuadratureSpec half = spec;
    half.abs_tol = 0.5 * spec.abs_tol;
    return integrate_interval(mapped, 0.0, std::sqrt(length), half);
  };
  const auto left = side(-1.0, s0 - a);
  const auto right = side(+1.0, b - s0);
  return {left.value + right.value, left.error + right.error,
          left.subdivisions + right.subdivisions, 0.0};
}

QuadratureResult polar_mean(const DimensionContext& ctx, const std::function<double(double)>& g,
                            double phi_max, const QuadratureSpec& spec) {
  if (phi_max <= 0.0) return {};
  const int power = ctx.n - 2;
  const RadialFn mapped = [&](double psi) {
    const double phi = psi * psi;
    return g(phi) * std::pow(std::sin(phi), power) * 2.0 * psi;
  };
  auto res = integrate_interval(mapped, 0.0, std::sqrt(std::min(phi_max, std::numbers::pi)), spec);
  const double w = ctx.polar_weight();
  res.value *= w;
  res.error *= w;
  return res;
}

double sphere_mean_log_kernel(const DimensionContext& ctx, double r, double s,
                              const QuadratureSpec& spec) {
  if (!(s > 0.0)) throw DomainError("sphere_mean_log_kernel requires s > 0");
  if (r < 0.0) throw DomainError("sphere_mean_log_kernel requires r >= 0");
  if (r == 0.0) return std::log(s);
  const double big = std::max(r, s);
  const double rho = std::min(r, s) / big;
  // |θ − ρe|² = (1−ρ)² + 4ρ sin²(φ/2) = 1 + ρ(ρ − 2cos φ)
  const auto half_log = [rho](double phi) {
    const double x = rho * (rho - 2.0 * std::cos(phi));
    if (std::abs(x) < 0.5) return 0.5 * std::log1p(x);
    const double sh = std::sin(0.5 * phi);
    return 0.5 * std::log((1.0 - rho) * (1.0 - rho) + 4.0 * rho * sh * sh);
  };
  QuadratureSpec inner = spec;
  inner.abs_tol = std::min(spec.abs_tol, 1e-13);
  inner.rel_tol = std::min(spec.rel_tol, 1e-11);
  return std::log(big) + polar_mean(ctx, half_log, std::numbers::pi, inner).value;
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw DomainError("gauss_legendre needs at least one node");
  nodes.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = count == 1 ? 1.0 : count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
  if (count % 2 == 1) nodes[static_cast<std::size_t>(count / 2)] = 0.0;
}

double sphere_quadrature(const DimensionContext& ctx, const DirectionFn& h,
                         const QuadratureSpec& spec) {
  const SphereRule& rule = sphere_rule(ctx, spec.sphere_nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * h(rule.direction(i));
  return sum;
}

double ball_integral(const DimensionContext& ctx, const DirectionFn& h, double radius,
                     const QuadratureSpec& spec) {
  if (!(radius > 0.0)) return 0.0;
  const std::size_t n = static_cast<std::size_t>(ctx.n);
  const RadialFn shell = [&](double r) {
    std::vector<double> x(n);
    const double mean = sphere_quadrature(
        ctx,
        [&](std::span<const double> theta) {
          for (std::size_t i = 0; i < n; ++i) x[i] = r * theta[i];
          return h(x);
        },
        spec);
    return std::pow(r, ctx.n - 1) * mean;
  };
  return ctx.omega_n_minus_1 * integrate_interval(shell, 0.0, radius, spec).value;
}

double layer_cake_lhs(const DimensionContext& ctx, const DirectionFn& u, double radius,
                      const QuadratureSpec& spec) {
  const RadialFn integrand = [&](double r) {
    return ball_integral(ctx, u, r, spec) / (ctx.omega_n_minus_1 * std::pow(r, ctx.n - 1));
  };
  return integrate_interval(integrand, 0.0, radius, spec).value;
}

double layer_cake_rhs(const DimensionContext& ctx, const DirectionFn& u, double radius,
                      const QuadratureSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(ctx.n);
  const double tail_power = std::pow(radius, 2 - ctx.n);
  // r^{n-1}(r^{2-n} − R^{2-n}) = r − r^{n-1} R^{2-n}, no singularity at r = 0.
  const RadialFn shell = [&](double r) {
    std::vector<double> x(n);
    const double mean = sphere_quadrature(
        ctx,
        [&](std::span<const double> theta) {
          for (std::size_t i = 0; i < n; ++i) x[i] = r * theta[i];
          return u(x);
        },
        spec);
    return (r - std::pow(r, ctx.n - 1) * tail_power) * mean;
  };
  const double integral = ctx.omega_n_minus_1 * integrate_interval(shell, 0.0, radius, spec).value;
  return integral / ((ctx.n - 2) * ctx.omega_n_minus_1);
}

}  // namespace qcurv
