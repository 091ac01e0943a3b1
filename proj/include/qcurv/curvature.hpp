#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcurv/dimension.hpp"
#include "qcurv/profiles.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv {

using RadialFunction = std::function<double(double)>;

// r ↦ u''(r) + (n−1) u'(r)/r, computed in t = r² as 4t U'' + 2n U'.
// The result has two fewer derivative orders than u.
ProfilePtr radial_laplacian(const DimensionContext& ctx, ProfilePtr u);

// (−Δ)^k u for 1 <= k <= m.
ProfilePtr polyharmonic(const DimensionContext& ctx, ProfilePtr u, int k);

// Q_g = ½ e^{−nu} (−Δ)^m u.
RadialFunction q_curvature(const DimensionContext& ctx, ProfilePtr u);

// log Q_g evaluated as log(½(−Δ)^m u) − n u, finite where exp would underflow.
// NaN where (−Δ)^m u <= 0.
RadialFunction log_q_curvature(const DimensionContext& ctx, ProfilePtr u);

struct CurvatureDensity {
  RadialFunction f;                 // Q_g e^{nu} = ½ (−Δ)^m u
  DecayModel decay = DecayModel::power(8.0);  // declared decay of f itself
  double positive_beyond = 0.0;     // R₀: f >= 0 on the scanned range beyond it
  std::optional<double> total_mass_over_cn;
};

// f = Q e^{nu}, taken directly as ½(−Δ)^m u so that e^{±nu} never overflows.
// Log-asymptotic profiles have a polyharmonic remainder decaying like r^{-2n};
// that power is the declared tail model.
CurvatureDensity density(const DimensionContext& ctx, ProfilePtr u,
                         const QuadratureSpec& spec = {});

CurvatureDensity zero_density(const DimensionContext& ctx);

// α = (1/c_n) |S^{n-1}| ∫_0^∞ f(r) r^{n-1} dr.
double total_alpha(const DimensionContext& ctx, const CurvatureDensity& d,
                   const QuadratureSpec& spec = {});

// R_g = e^{−2u} (n−1) (−2Δu − (n−2) u'²).
RadialFunction scalar_curvature(const DimensionContext& ctx, ProfilePtr u);

enum class DecayVerdict { satisfies, violates, indeterminate };
std::string to_string(DecayVerdict verdict);

struct DecayMarginReport {
  std::vector<std::pair<double, double>> rows;  // (r, ε(r) = −log Q(r) / r²)
  DecayVerdict verdict = DecayVerdict::indeterminate;
  double tail_value = 0.0;  // ε at the last grid point
};

// Heuristic test of e^{−o₊(1) r²} <= Q on the last five grid points:
// satisfies when ε is positive and drops by more than 0.1% per step, or when
// ε <= 0 throughout (Q >= 1),
// violates when it is positive and flat to within 5%, indeterminate otherwise.
// Throws SignError when Q <= 0 anywhere on those points.
DecayMarginReport decay_margin(const DimensionContext& ctx, ProfilePtr u,
                               std::span<const double> r_grid);

}  // namespace qcurv
