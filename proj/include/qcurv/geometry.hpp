#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcurv/dimension.hpp"
#include "qcurv/profiles.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv {

struct DefectReport {
  double alpha = 0.0;
  double defect_extrapolated = 0.0;
  std::vector<std::pair<double, double>> defect_samples;       // (r, I(r))
  std::vector<std::pair<double, double>> increment_quotients;  // (√(r_j r_{j+1}), ΔA/ΔV)
  std::string fit_model;
  double fit_exponent = 0.0;   // q
  double fit_amplitude = 0.0;  // a
  double fit_residual = 0.0;   // RMS over the fitted points
  double consistency_gap = 0.0;  // |(1 − α) − D|
  bool low_confidence = false;
  double fallback_error = 0.0;
};

// |∂B_r|_g = |S^{n-1}| r^{n-1} e^{(n-1)u(r)}.
double metric_sphere_area(const DimensionContext& ctx, const RadialProfile& u, double r);

// |B_r|_g = |S^{n-1}| ∫_0^r s^{n-1} e^{nu(s)} ds.
double metric_ball_volume(const DimensionContext& ctx, const RadialProfile& u, double r,
                          const QuadratureSpec& spec = {});

// Logarithms of the two quantities above; finite where e^{nu} overflows.
double log_metric_sphere_area(const DimensionContext& ctx, const RadialProfile& u, double r);
double log_metric_shell_volume(const DimensionContext& ctx, const RadialProfile& u, double r0,
                               double r1, const QuadratureSpec& spec = {});

// I(r) = |∂B_r|^{n/(n-1)} / (n |S^{n-1}|^{1/(n-1)} |B_r|), evaluated in log space.
double isoperimetric_ratio(const DimensionContext& ctx, const RadialProfile& u, double r,
                           const QuadratureSpec& spec = {});

// Samples I(r) on the grid and estimates lim I(r). The limit is extrapolated
// from the increment quotients (A(r_{j+1}) − A(r_j)) / |B_{r_{j+1}} \ B_{r_j}|,
// A = |∂B|^{n/(n-1)} / (n |S^{n-1}|^{1/(n-1)}), which share the limit of I when
// the volume diverges and converge at a power rate even when I itself
// converges logarithmically. Fit: D + a r^{-q} by least squares on the last
// (up to five, at least four) quotients with q ∈ [0.05, 8]. When the optimum
// sits on the q boundary or the fit is not finite, D falls back to the last
// quotient with error |S_J − S_{J−1}| and low_confidence is set.
DefectReport defect_extrapolate(const DimensionContext& ctx, ProfilePtr u,
                                const QuadratureSpec& spec, std::span<const double> r_grid);

enum class Completeness { complete, incomplete, indeterminate };
std::string to_string(Completeness c);

struct CompletenessReport {
  Completeness verdict = Completeness::indeterminate;
  double slope = 0.0;
  std::vector<std::pair<double, double>> log_partial_lengths;  // (R, log ∫_0^R e^u dr)
};

// Slope test on u(r)/log r over r ∈ [10², 10⁵]: complete above −0.98,
// incomplete below −1.02, indeterminate in between.
CompletenessReport completeness_classify(const DimensionContext& ctx, ProfilePtr u,
                                         const QuadratureSpec& spec = {});

}  // namespace qcurv
