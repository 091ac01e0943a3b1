#include "qcurv/dimension.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "qcurv/errors.hpp"

namespace qcurv {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kMaxDimension = 64;

cpp_int factorial(int k) {
  cpp_int r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

cpp_int double_factorial(int k) {
  cpp_int r = 1;
  for (int i = k; i > 1; i -= 2) r *= i;
  return r;
}

double to_double(const cpp_rational& q) { return q.convert_to<double>(); }

}  // namespace

double sphere_measure(int k) {
  if (k < 0) throw DomainError("sphere_measure: negative dimension");
  const double pi = std::numbers::pi;
  if (k % 2 == 1) {
    // |S^{2j-1}| = 2 π^j / (j-1)!
    const int j = (k + 1) / 2;
    return 2.0 * std::pow(pi, j) / factorial(j - 1).convert_to<double>();
  }
  // |S^{2j}| = 2^{j+1} π^j / (2j-1)!!
  const int j = k / 2;
  const cpp_rational q(cpp_int(1) << (j + 1), double_factorial(2 * j - 1));
  return to_double(q) * std::pow(pi, j);
}

double DimensionContext::d(int k) const {
  if (k < 1 || k > m - 1) {
    throw DomainError("d_k defined for 1 <= k <= m-1, got k = " + std::to_string(k));
  }
  return d_chain[static_cast<std::size_t>(k - 1)];
}

DimensionContext make_context(int n) {
  if (n % 2 != 0 || n < 4) {
    throw DimensionError("dimension must be even and >= 4, got n = " + std::to_string(n));
  }
  if (n > kMaxDimension) {
    throw DimensionError("dimension above " + std::to_string(kMaxDimension) + " not supported");
  }
  DimensionContext ctx;
  ctx.n = n;
  ctx.m = n / 2;
  const double pi = std::numbers::pi;

  const cpp_int cn_integer = (cpp_int(1) << (n - 2)) * factorial(ctx.m - 1);
  ctx.c_n = cn_integer.convert_to<double>() * std::pow(pi, ctx.m);

  ctx.omega_n_minus_2 = sphere_measure(n - 2);
  ctx.omega_n_minus_1 = sphere_measure(n - 1);
  ctx.omega_n = sphere_measure(n);
  ctx.q_sphere = to_double(cpp_rational(factorial(n - 1), 2));

  ctx.pizzetti.assign(static_cast<std::size_t>(ctx.m), 0.0);
  ctx.pizzetti[0] = 1.0;
  for (int i = 1; i < ctx.m; ++i) {
    const cpp_rational ci = cpp_rational(n, n + 2 * i) *
                            cpp_rational(double_factorial(n - 2),
                                         double_factorial(2 * i) * double_factorial(2 * i + n - 2));
    ctx.pizzetti[static_cast<std::size_t>(i)] = to_double(ci);
  }

  cpp_int dk = -(n - 2);
  for (int k = 1; k <= ctx.m - 1; ++k) {
    ctx.d_chain.push_back(dk.convert_to<double>());
    dk *= 2 * k * (n - 2 * k - 2);
  }
  return ctx;
}

}  // namespace qcurv
