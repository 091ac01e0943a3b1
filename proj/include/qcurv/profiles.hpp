#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcurv/dimension.hpp"

namespace qcurv {

// A radial conformal factor u(|x|).
//
// Every profile is stored as a function of the squared radius, u(r) = U(r²).
// Radial derivatives follow from the t-derivatives of U by
//   d^k/dr^k U(r²) = Σ_{j=⌈k/2⌉}^{k} k! / ((2j−k)! (k−j)!) (2r)^{2j−k} U^{(j)}(r²),
// which keeps odd r-derivatives exactly zero at the origin.
class RadialProfile {
 public:
  enum class Provenance { closed_form, numeric_differentiated };

  virtual ~RadialProfile() = default;

  // d^order u / dr^order at radius r >= 0.
  double eval(double r, int order = 0) const;
  double operator()(double r) const { return eval(r, 0); }

  // d^order U / dt^order at t = r².
  double square_radius_derivative(double t, int order) const;

  int max_order() const { return max_order_; }
  Provenance provenance() const { return provenance_; }
  const std::optional<double>& asymptotic_slope_hint() const { return slope_hint_; }
  const std::string& name() const { return name_; }

  // scale · L U, where L is the radial Laplacian in the variable t = r²,
  // when the profile class is closed under it. nullptr means the caller has
  // to fall back on the derivative recursion.
  virtual std::shared_ptr<const RadialProfile> exact_laplacian(int n, double scale) const {
    (void)n;
    (void)scale;
    return nullptr;
  }

 protected:
  RadialProfile(std::string name, int max_order, Provenance provenance,
                std::optional<double> slope_hint)
      : name_(std::move(name)),
        max_order_(max_order),
        provenance_(provenance),
        slope_hint_(slope_hint) {}

  virtual double t_derivative(double t, int order) const = 0;

 private:
  std::string name_;
  int max_order_;
  Provenance provenance_;
  std::optional<double> slope_hint_;
};

using ProfilePtr = std::shared_ptr<const RadialProfile>;

// U(t) = a·log(2/(1+t)) + b·t + c with closed-form derivatives. Covers the
// whole catalog: the sphere family (a = α/2), the counterexample (a = b = 1),
// constants and |x|².
class LogQuadraticProfile final : public RadialProfile {
 public:
  LogQuadraticProfile(std::string name, double log_coeff, double quad_coeff, double constant,
                      int max_order);

  double log_coeff() const { return log_coeff_; }
  double quad_coeff() const { return quad_coeff_; }

  // Laplacians stay in closed form: log(1+t) maps to a Laurent polynomial in
  // 1+t whose integer coefficients are carried exactly, so the cancellation
  // between terms that plagues the recursion at large r never happens.
  std::shared_ptr<const RadialProfile> exact_laplacian(int n, double scale) const override;

 private:
  double t_derivative(double t, int order) const override;

  double log_coeff_;
  double quad_coeff_;
  double constant_;
};

// u_α(r) = (α/2) log(2/(1+r²)), 0 < α <= 1.
ProfilePtr catalog_sphere_family(const DimensionContext& ctx, double alpha);

// u(r) = log(2/(1+r²)) + r²: complete, total curvature 2, Q = q_sphere e^{-n r²}.
ProfilePtr catalog_counterexample(const DimensionContext& ctx);

// u ≡ c.
ProfilePtr constant_profile(const DimensionContext& ctx, double c);

// u(r) = r².
ProfilePtr square_profile(const DimensionContext& ctx);

// u(r) = −(β/2) log(1 + r²), asymptotic slope −β.
ProfilePtr catalog_log_decay(const DimensionContext& ctx, double beta);

// Interpolating B-spline of degree 2m+1 in t = r² through (r_i, u_i).
// Beyond the last sample the profile continues as u(r_max) + s log(r/r_max)
// with s = r_max u'(r_max), which also sets the asymptotic slope hint.
ProfilePtr numeric_profile(const DimensionContext& ctx,
                           const std::vector<std::pair<double, double>>& samples);

// Reads "r,u" rows (optional header line) and builds a numeric profile.
ProfilePtr load_profile_csv(const DimensionContext& ctx, const std::string& path);

// Parses "sphere:<alpha>", "counterexample", "flat", "logdecay:<beta>" or "file:<path>".
ProfilePtr profile_from_selector(const DimensionContext& ctx, const std::string& selector);

// base(|x|) + envelope(|x|) · θ₁ with θ = x/|x|. The envelope
// amplitude · r / (1+r²)^{(p+1)/2} decays like r^{-p} and vanishes at the
// origin, so the field stays smooth.
struct PerturbedField {
  ProfilePtr base;
  double amplitude = 0.0;
  double decay_power = 1.0;

  double envelope(double r) const;
  double operator()(std::span<const double> x) const;
};

PerturbedField make_perturbed(ProfilePtr base, double amplitude, double decay_power);

}  // namespace qcurv
