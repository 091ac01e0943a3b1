#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qcurv/curvature.hpp"
#include "qcurv/dimension.hpp"
#include "qcurv/profiles.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv {

struct PotentialReport {
  std::vector<std::pair<double, double>> v_values;
  double constant_estimate = 0.0;  // C with u + v ≈ C, taken as u(0) since v(0) = 0
  double residual_sup = 0.0;       // max |u + v − C| over the grid
  double alpha = 0.0;
  std::optional<double> eps;
  std::optional<double> upper_margin;  // max over r > 1 of v − α log r
  std::vector<std::pair<double, double>> b_values;
  std::vector<std::pair<double, double>> lower_check;  // (r, v + b − (α−ε) log r), r > 1
};

// v(r) = (1/c_n) ∫ log(|x−y|/|y|) f(y) dy at |x| = r, reduced to
// (|S^{n-1}|/c_n) ∫_0^∞ s^{n-1} f(s) (M(r,s) − log s) ds with the angular mean
// M of the log kernel taken first.
double potential_v(const DimensionContext& ctx, const CurvatureDensity& d, double r,
                   const QuadratureSpec& spec = {});

// b(r) = (1/c_n) ∫_{|x−y|<1} log(1/|x−y|) f(y) dy at |x| = r.
double bad_term_b(const DimensionContext& ctx, const CurvatureDensity& d, double r,
                  const QuadratureSpec& spec = {});

// Mean over θ ∈ S^{n-1} of |r e₁ − s θ|^{−2k}.
double riesz_sphere_mean(const DimensionContext& ctx, int k, double r, double s,
                         const QuadratureSpec& spec = {});

// (−Δ)^k v at radius r from the kernel form (d_k/c_n) ∫ f(y) |x−y|^{−2k} dy, 1 <= k <= m−1.
double iterated_laplacian_v(const DimensionContext& ctx, const CurvatureDensity& d, int k,
                            double r, const QuadratureSpec& spec = {});

PotentialReport normality_residual(const DimensionContext& ctx, ProfilePtr u,
                                   const QuadratureSpec& spec, std::span<const double> r_grid);

// Upper side v − α log r and lower side v + b − (α−ε) log r on the grid.
PotentialReport bound_margins(const DimensionContext& ctx, ProfilePtr u, double eps,
                              const QuadratureSpec& spec, std::span<const double> r_grid);

}  // namespace qcurv
