#include "bspline.hpp"

#include <algorithm>
#include <cmath>

#include "qcurv/errors.hpp"

namespace qcurv::detail {

InterpolatingBSpline::InterpolatingBSpline(const std::vector<double>& x,
                                           const std::vector<double>& y, int degree)
    : degree_(degree) {
  const int count = static_cast<int>(x.size());
  const int order = degree + 1;
  if (count < order) throw DomainError("B-spline interpolation needs more points than its degree");

  knots_.assign(static_cast<std::size_t>(count + order), 0.0);
  for (int i = 0; i < order; ++i) {
    knots_[static_cast<std::size_t>(i)] = x.front();
    knots_[static_cast<std::size_t>(count + i)] = x.back();
  }
  for (int j = 1; j <= count - order; ++j) {
    double sum = 0.0;
    for (int i = j; i < j + degree; ++i) sum += x[static_cast<std::size_t>(i)];
    knots_[static_cast<std::size_t>(j + degree)] = sum / degree;
  }

  // Banded collocation system, half-width `order`. Totally positive, so
  // elimination without pivoting is stable.
  const int width = order;
  const int stride = 2 * width + 1;
  std::vector<double> band(static_cast<std::size_t>(count * stride), 0.0);
  auto at = [&](int row, int col) -> double& {
    return band[static_cast<std::size_t>(row * stride + (col - row + width))];
  };
  std::vector<std::vector<double>> ders;
  for (int i = 0; i < count; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    const int span = find_span(xi);
    basis_derivatives(span, xi, 0, ders);
    for (int j = 0; j <= degree; ++j) {
      const int col = span - degree + j;
      if (std::abs(col - i) > width) throw DomainError("B-spline collocation band overflow");
      at(i, col) = ders[0][static_cast<std::size_t>(j)];
    }
  }
  coefficients_ = y;
  for (int k = 0; k < count; ++k) {
    const double pivot = at(k, k);
    if (pivot == 0.0) throw DomainError("singular B-spline collocation matrix");
    for (int i = k + 1; i <= std::min(count - 1, k + width); ++i) {
      const double factor = at(i, k) / pivot;
      if (factor == 0.0) continue;
      for (int j = k; j <= std::min(count - 1, k + width); ++j) at(i, j) -= factor * at(k, j);
      coefficients_[static_cast<std::size_t>(i)] -= factor * coefficients_[static_cast<std::size_t>(k)];
    }
  }
  for (int k = count - 1; k >= 0; --k) {
    double sum = coefficients_[static_cast<std::size_t>(k)];
    for (int j = k + 1; j <= std::min(count - 1, k + width); ++j) {
      sum -= at(k, j) * coefficients_[static_cast<std::size_t>(j)];
    }
    coefficients_[static_cast<std::size_t>(k)] = sum / at(k, k);
  }
}

int InterpolatingBSpline::find_span(double x) const {
  const int count = static_cast<int>(coefficients_.empty() ? knots_.size() - degree_ - 1
                                                           : coefficients_.size());
  if (x >= knots_[static_cast<std::size_t>(count)]) return count - 1;
  if (x <= knots_[static_cast<std::size_t>(degree_)]) return degree_;
  const auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + count + 1, x);
  return static_cast<int>(it - knots_.begin()) - 1;
}

void InterpolatingBSpline::basis_derivatives(int span, double x, int max_order,
                                             std::vector<std::vector<double>>& ders) const {
  const int p = degree_;
  const auto P = static_cast<std::size_t>(p);
  std::vector<std::vector<double>> ndu(P + 1, std::vector<double>(P + 1, 0.0));
  std::vector<double> left(P + 1), right(P + 1);
  ndu[0][0] = 1.0;
  for (std::size_t j = 1; j <= P; ++j) {
    left[j] = x - knots_[static_cast<std::size_t>(span) + 1 - j];
    right[j] = knots_[static_cast<std::size_t>(span) + j] - x;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  const auto D = static_cast<std::size_t>(max_order);
  ders.assign(D + 1, std::vector<double>(P + 1, 0.0));
  for (std::size_t j = 0; j <= P; ++j) ders[0][j] = ndu[j][P];
  std::vector<std::vector<double>> a(2, std::vector<double>(P + 1, 0.0));
  for (int r = 0; r <= p; ++r) {
    std::size_t s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= max_order; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(rk)];
        d = a[s2][0] * ndu[static_cast<std::size_t>(rk)][static_cast<std::size_t>(pk)];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        const auto J = static_cast<std::size_t>(j);
        a[s2][J] = (a[s1][J] - a[s1][J - 1]) /
                   ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(rk + j)];
        d += a[s2][J] * ndu[static_cast<std::size_t>(rk + j)][static_cast<std::size_t>(pk)];
      }
      if (r <= pk) {
        a[s2][static_cast<std::size_t>(k)] =
            -a[s1][static_cast<std::size_t>(k - 1)] / ndu[static_cast<std::size_t>(pk + 1)][static_cast<std::size_t>(r)];
        d += a[s2][static_cast<std::size_t>(k)] * ndu[static_cast<std::size_t>(r)][static_cast<std::size_t>(pk)];
      }
      ders[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= max_order; ++k) {
    for (std::size_t j = 0; j <= P; ++j) ders[static_cast<std::size_t>(k)][j] *= factor;
    factor *= (p - k);
  }
}

double InterpolatingBSpline::derivative(double x, int order) const {
  if (order > degree_) return 0.0;
  const int span = find_span(x);
  std::vector<std::vector<double>> ders;
  basis_derivatives(span, x, order, ders);
  double sum = 0.0;
  for (int j = 0; j <= degree_; ++j) {
    sum += ders[static_cast<std::size_t>(order)][static_cast<std::size_t>(j)] *
           coefficients_[static_cast<std::size_t>(span - degree_ + j)];
  }
  return sum;
}

}  // namespace qcurv::detail
