#pragma once

#include <vector>

namespace qcurv::detail {

// Interpolating B-spline of a given degree through (x_i, y_i), with knots
// placed by averaging consecutive data sites.
class InterpolatingBSpline {
 public:
  InterpolatingBSpline(const std::vector<double>& x, const std::vector<double>& y, int degree);

  // d^order s / dx^order; x outside the data range evaluates the end polynomial.
  double derivative(double x, int order) const;
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

 private:
  int find_span(double x) const;
  // Basis function derivatives ders[k][j] of order k <= max_order, Piegl & Tiller A2.3.
  void basis_derivatives(int span, double x, int max_order, std::vector<std::vector<double>>& ders) const;

  int degree_;
  std::vector<double> knots_;
  std::vector<double> coefficients_;
};

}  // namespace qcurv::detail
