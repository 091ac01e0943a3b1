#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qcurv/dimension.hpp"

namespace qcurv {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_subdivisions = 2000;
  // Half-line integrals switch to a decay-model tail estimate here.
  double tail_cut = 100.0;
  // Nodes per angle for the n = 4 product rule; base directions for n >= 6.
  int sphere_nodes = 64;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  double tail_bound = 0.0;  // magnitude of the model-based tail (half-line only)
};

using RadialFn = std::function<double(double)>;
using DirectionFn = std::function<double(std::span<const double>)>;

// Declared asymptotic decay of a half-line integrand.
struct DecayModel {
  enum class Kind { power, exponential, gaussian };
  Kind kind = Kind::power;
  double rate = 2.0;  // p for r^{-p}; λ for e^{-λr}; λ for e^{-λr²}

  static DecayModel power(double p) { return {Kind::power, p}; }
  static DecayModel exponential(double lambda) { return {Kind::exponential, lambda}; }
  static DecayModel gaussian(double lambda) { return {Kind::gaussian, lambda}; }
};

// Adaptive Gauss–Kronrod (21-point) on [a, b]. Throws ConvergenceError when
// max_subdivisions is exhausted before max(abs_tol, rel_tol·|I|) is met.
QuadratureResult integrate_interval(const RadialFn& g, double a, double b,
                                    const QuadratureSpec& spec);

// ∫_a^∞ g. Quadrature up to the cut, plus the tail of the declared model
// matched to g at the cut. The cut starts at max(spec.tail_cut, 2a) and is
// doubled while the tail exceeds tolerance; TailError when that never happens
// or the model is not integrable.
QuadratureResult integrate_halfline(const RadialFn& g, double a, const QuadratureSpec& spec,
                                    DecayModel decay);

// ∫_a^b g for g with a logarithmic singularity at s0. Splits at s0 and maps
// each side through s = s0 ± τ², which turns the log into an integrable
// τ log τ. s0 outside [a, b] falls through to plain interval quadrature.
QuadratureResult integrate_log_singular(const RadialFn& g, double s0, double a, double b,
                                        const QuadratureSpec& spec);

// Mean over unit directions θ ∈ S^{n-1} of log|r e₁ − s θ|.
double sphere_mean_log_kernel(const DimensionContext& ctx, double r, double s,
                              const QuadratureSpec& spec = {});

// Polar-angle mean: (ω_{n-2}/ω_{n-1}) ∫_0^π g(φ) sin^{n-2}φ dφ, with the
// φ = ψ² substitution so that kernels singular at φ = 0 stay integrable.
QuadratureResult polar_mean(const DimensionContext& ctx, const std::function<double(double)>& g,
                            double phi_max, const QuadratureSpec& spec);

// A fixed sphere rule: unit directions with positive weights summing to one.
struct SphereRule {
  int dim = 0;
  std::vector<double> directions;  // dim values per node, row-major
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> direction(std::size_t i) const {
    return {directions.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

// n = 4: product rule over the hyperspherical angles (Gauss–Chebyshev in cos ψ,
// Gauss–Legendre in cos θ, trapezoid in φ).
// n >= 6: Halton directions symmetrized over coordinate sign flips and
// cyclic coordinate shifts.
const SphereRule& sphere_rule(const DimensionContext& ctx, int nodes);

// Mean of h over S^{n-1}.
double sphere_quadrature(const DimensionContext& ctx, const DirectionFn& h,
                         const QuadratureSpec& spec = {});

// Gauss–Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

// ∫_{B_R(0)} h(x) dx, factored as ∫_0^R r^{n-1} |S^{n-1}| (sphere mean at r) dr.
double ball_integral(const DimensionContext& ctx, const DirectionFn& h, double radius,
                     const QuadratureSpec& spec = {});

// The two sides of the layer-cake identity
//   ∫_0^R |∂B_r|^{-1} ∫_{B_r} u dx dr = ((n-2) ω_{n-1})^{-1} ∫_{B_R} (|x|^{2-n} − R^{2-n}) u dx.
double layer_cake_lhs(const DimensionContext& ctx, const DirectionFn& u, double radius,
                      const QuadratureSpec& spec = {});
double layer_cake_rhs(const DimensionContext& ctx, const DirectionFn& u, double radius,
                      const QuadratureSpec& spec = {});

}  // namespace qcurv
