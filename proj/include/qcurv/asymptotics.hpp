#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qcurv/curvature.hpp"
#include "qcurv/dimension.hpp"
#include "qcurv/profiles.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv {

struct AsymptoticsReport {
  double slope = 0.0;      // least-squares estimate of lim u(r)/log r
  double intercept = 0.0;
  double slope_residual = 0.0;  // max |u − fit| / log r_max
  bool non_logarithmic = false;
  std::vector<std::pair<double, double>> ru_prime_tail;  // (r, r u'(r))
  bool bounds_ok = false;
  std::vector<double> grid;
};

// Least-squares fit of u(r) against log r. The grid needs at least four
// increasing radii spanning two decades.
AsymptoticsReport slope_estimate(const RadialProfile& u, std::span<const double> r_grid);

struct RadialLimitReport {
  std::vector<std::pair<double, double>> rows;  // (r, r u'(r))
  double limit = 0.0;
  double limit_error = 0.0;
  bool low_confidence = false;
  double alpha = 0.0;
  double gap = 0.0;  // |limit + α|
};

// Tail table of r u'(r) with a Richardson limit under the ansatz L + c/r².
// The estimate from the last pair is checked against the one from the
// previous pair; if they disagree by more than 10% of the sample spread the
// last sample is returned with a gap-based error.
RadialLimitReport radial_limit_check(const DimensionContext& ctx, const RadialProfile& u,
                                     const CurvatureDensity& d, std::span<const double> r_grid,
                                     const QuadratureSpec& spec = {});

struct BoundsReport {
  bool ok = false;
  double upper_constant = 0.0;  // C₁ ≥ u + (α − ε) log r
  double lower_constant = 0.0;  // C₂ ≥ −(u + α log r)
  double upper_growth = 0.0;    // d/dlog r of u + (α − ε) log r on the outer half
  double lower_growth = 0.0;
};

// Boundedness is judged by growth: on the outer half of the grid both
// u + (α − ε) log r and −(u + α log r) must grow no faster than (ε/2) log r.
BoundsReport bounds_check(const RadialProfile& u, double alpha, double eps,
                          std::span<const double> r_grid);

double spherical_average(const DimensionContext& ctx, const PerturbedField& field, double r,
                         const QuadratureSpec& spec = {});
double spherical_average(const DimensionContext& ctx, const RadialProfile& u, double r,
                         const QuadratureSpec& spec = {});

// mean e^{k field} / e^{k mean field} over the sphere of radius r. Computed as
// mean e^{k (field − mean)}, so it never overflows and stays >= 1 up to rounding.
double exp_average_ratio(const DimensionContext& ctx, const PerturbedField& field, double k,
                         double r, const QuadratureSpec& spec = {});

// (α from the field's own density, α from the density of its spherical
// average). n = 4 only: the bilaplacian is taken with a 4D finite-difference
// stencil of spacing h(1 + r), Richardson-combined over h = 0.01 and 0.005,
// and both sides are integrated in r on the same 64-node Gauss–Legendre rule.
std::pair<double, double> averaged_alpha_invariance(const DimensionContext& ctx,
                                                    const PerturbedField& field,
                                                    const QuadratureSpec& spec = {});

// Geometric tail grid with the given number of points per decade.
std::vector<double> geometric_grid(double r_min, double r_max, int points_per_decade);

}  // namespace qcurv
