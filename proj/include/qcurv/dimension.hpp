#pragma once

#include <vector>

namespace qcurv {

// Dimension-dependent constants for even n = 2m >= 4.
//
// q_sphere follows the convention of the equation (-Δ)^m u = 2 Q e^{nu}:
// it is the round-sphere Q in that normalization, (n-1)!/2, which equals
// 2 c_n / ω_n. For n = 4 this gives 3 rather than the geometric value 6.
struct DimensionContext {
  int n = 0;
  int m = 0;
  double c_n = 0.0;
  double omega_n_minus_1 = 0.0;  // |S^{n-1}|
  double omega_n = 0.0;          // |S^n|
  double q_sphere = 0.0;
  std::vector<double> pizzetti;  // c_0 .. c_{m-1}
  std::vector<double> d_chain;   // d_1 .. d_{m-1}, stored at index k-1

  // d_k for 1 <= k <= m-1.
  double d(int k) const;
  // |S^{n-2}| / |S^{n-1}|: normalizes ∫_0^π (.) sin^{n-2}φ dφ into a sphere mean.
  double polar_weight() const { return omega_n_minus_2 / omega_n_minus_1; }

  double omega_n_minus_2 = 0.0;
};

DimensionContext make_context(int n);

// Measure of the unit sphere S^k ⊂ R^{k+1}, from exact factorials.
double sphere_measure(int k);

}  // namespace qcurv
