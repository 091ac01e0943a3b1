#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "qcurv/errors.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv {

namespace {

SphereRule product_rule_s3(int nodes) {
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  SphereRule rule;
  rule.dim = 4;
  const double pi = std::numbers::pi;
  // cos ψ by Gauss–Chebyshev of the second kind (weight sin²ψ dψ = √(1−t²) dt),
  // cos θ by Gauss–Legendre, φ by the periodic trapezoid rule. Exact for
  // polynomials of degree < nodes in the coordinates.
  std::vector<double> psi(x.size()), wpsi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double angle = pi * static_cast<double>(i + 1) / (nodes + 1);
    psi[i] = angle;
    wpsi[i] = pi / (nodes + 1) * std::sin(angle) * std::sin(angle);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cpsi = std::cos(psi[i]), spsi = std::sin(psi[i]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double ct = x[j];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int k = 0; k < nodes; ++k) {
        const double phi = 2.0 * pi * (k + 0.5) / nodes;
        rule.directions.insert(rule.directions.end(),
                               {cpsi, spsi * ct, spsi * st * std::cos(phi), spsi * st * std::sin(phi)});
        const double weight = wpsi[i] * w[j] * (2.0 * pi / nodes);
        rule.weights.push_back(weight);
        total += weight;
      }
    }
  }
  for (double& weight : rule.weights) weight /= total;
  return rule;
}

double radical_inverse(unsigned long long index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

SphereRule symmetric_halton_rule(int dim, int base_points) {
  static constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                         43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
                                         103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157,
                                         163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
                                         227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277,
                                         281, 283, 293, 307, 311};
  const std::size_t d = static_cast<std::size_t>(dim);
  // Full sign-flip group up to 12 dimensions; antipodal pairs only above that.
  const bool all_signs = dim <= 12;
  const unsigned long long sign_patterns = all_signs ? (1ULL << dim) : 2ULL;

  SphereRule rule;
  rule.dim = dim;
  std::vector<double> base(d), moved(d);
  for (int p = 1; p <= base_points; ++p) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double u = radical_inverse(static_cast<unsigned long long>(p), kPrimes[i]);
      base[i] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
      norm2 += base[i] * base[i];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& b : base) b *= inv;
    for (std::size_t shift = 0; shift < d; ++shift) {
      for (unsigned long long mask = 0; mask < sign_patterns; ++mask) {
        for (std::size_t i = 0; i < d; ++i) {
          const double v = base[(i + shift) % d];
          const bool flip = all_signs ? ((mask >> i) & 1ULL) != 0 : mask == 1ULL;
          moved[i] = flip ? -v : v;
        }
        rule.directions.insert(rule.directions.end(), moved.begin(), moved.end());
      }
    }
  }
  const std::size_t count = rule.directions.size() / d;
  rule.weights.assign(count, 1.0 / static_cast<double>(count));
  return rule;
}

}  // namespace

const SphereRule& sphere_rule(const DimensionContext& ctx, int nodes) {
  if (nodes < 2) throw DomainError("sphere rule needs at least 2 nodes");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<SphereRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{ctx.n, nodes}];
  if (!slot) {
    slot = std::make_unique<SphereRule>(ctx.n == 4 ? product_rule_s3(nodes)
                                                   : symmetric_halton_rule(ctx.n, nodes));
  }
  return *slot;
}

}  // namespace qcurv
