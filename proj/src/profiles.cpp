#include "qcurv/profiles.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bspline.hpp"
#include "qcurv/errors.hpp"

namespace qcurv {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// d^j/dt^j of log(1+t) for j >= 1.
double log1p_derivative(double t, int j) {
  const double sign = (j % 2 == 1) ? 1.0 : -1.0;
  return sign * factorial(j - 1) / std::pow(1.0 + t, j);
}

class NumericProfile final : public RadialProfile {
 public:
  NumericProfile(detail::InterpolatingBSpline spline, double t_max, int max_order)
      : RadialProfile("numeric", max_order, Provenance::numeric_differentiated,
                      2.0 * t_max * spline.derivative(t_max, 1)),
        spline_(std::move(spline)),
        t_max_(t_max),
        u_max_(spline_.derivative(t_max, 0)),
        half_slope_(t_max * spline_.derivative(t_max, 1)) {}

 private:
  double t_derivative(double t, int order) const override {
    if (t <= t_max_) return spline_.derivative(t, order);
    // log continuation: U = U_max + (s/2) log(t / t_max)
    if (order == 0) return u_max_ + half_slope_ * std::log(t / t_max_);
    const double sign = (order % 2 == 1) ? 1.0 : -1.0;
    return half_slope_ * sign * factorial(order - 1) / std::pow(t, order);
  }

  detail::InterpolatingBSpline spline_;
  double t_max_;
  double u_max_;
  double half_slope_;
};

}  // namespace

double RadialProfile::square_radius_derivative(double t, int order) const {
  if (order < 0 || order > max_order_) {
    throw OrderError("profile '" + name_ + "' provides derivatives up to order " +
                     std::to_string(max_order_) + ", requested " + std::to_string(order));
  }
  if (t < 0.0) throw DomainError("squared radius must be >= 0");
  return t_derivative(t, order);
}

double RadialProfile::eval(double r, int order) const {
  if (order < 0 || order > max_order_) {
    throw OrderError("profile '" + name_ + "' provides derivatives up to order " +
                     std::to_string(max_order_) + ", requested " + std::to_string(order));
  }
  if (r < 0.0) throw DomainError("radius must be >= 0");
  const double t = r * r;
  if (order == 0) return t_derivative(t, 0);
  double sum = 0.0;
  const double kfact = factorial(order);
  for (int j = (order + 1) / 2; j <= order; ++j) {
    const int power = 2 * j - order;
    const double coeff = kfact / (factorial(power) * factorial(order - j));
    const double radial = power == 0 ? 1.0 : std::pow(2.0 * r, power);
    if (radial == 0.0) continue;
    sum += coeff * radial * t_derivative(t, j);
  }
  return sum;
}

LogQuadraticProfile::LogQuadraticProfile(std::string name, double log_coeff, double quad_coeff,
                                         double constant, int max_order)
    : RadialProfile(std::move(name), max_order, Provenance::closed_form,
                    quad_coeff == 0.0 ? std::optional<double>(-2.0 * log_coeff) : std::nullopt),
      log_coeff_(log_coeff),
      quad_coeff_(quad_coeff),
      constant_(constant) {}

double LogQuadraticProfile::t_derivative(double t, int order) const {
  if (order == 0) {
    return log_coeff_ * (std::numbers::ln2 - std::log1p(t)) + quad_coeff_ * t + constant_;
  }
  double value = log_coeff_ == 0.0 ? 0.0 : -log_coeff_ * log1p_derivative(t, order);
  if (order == 1) value += quad_coeff_;
  return value;
}

namespace {

using boost::multiprecision::cpp_int;

// U(t) = A (κ log s + Σ_p q_p s^{-p}) + C with s = 1 + t and exact integers q_p.
class LaurentLogProfile final : public RadialProfile {
 public:
  LaurentLogProfile(std::string name, int max_order, double scale, bool has_log,
                    std::vector<cpp_int> coefficients, double constant)
      : RadialProfile(std::move(name), max_order, Provenance::closed_form, std::nullopt),
        scale_(scale),
        has_log_(has_log),
        exact_(std::move(coefficients)),
        constant_(constant) {
    for (const auto& q : exact_) coefficients_.push_back(static_cast<double>(q));
  }

  std::shared_ptr<const RadialProfile> exact_laplacian(int n, double scale) const override {
    return std::make_shared<LaurentLogProfile>("laplacian(" + name() + ")", max_order() - 2,
                                               scale * scale_, false, apply(n), 0.0);
  }

  // Coefficients of L(κ log s + Σ q_p s^{-p}), index p.
  //   L log s   = (2n−4) s^{-1} + 4 s^{-2}
  //   L s^{-p}  = (4p(p+1) − 2np) s^{-p-1} − 4p(p+1) s^{-p-2}
  std::vector<cpp_int> apply(int n) const {
    std::vector<cpp_int> out(exact_.size() + 2);
    if (has_log_) {
      if (out.size() < 3) out.resize(3);
      out[1] += 2 * n - 4;
      out[2] += 4;
    }
    for (std::size_t p = 1; p < exact_.size(); ++p) {
      if (exact_[p] == 0) continue;
      const cpp_int pp = static_cast<long long>(p);
      out[p + 1] += exact_[p] * (4 * pp * (pp + 1) - 2 * n * pp);
      out[p + 2] -= exact_[p] * 4 * pp * (pp + 1);
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
  }

 private:
  double t_derivative(double t, int order) const override {
    const double s = 1.0 + t;
    double sum = 0.0;
    if (order == 0) {
      if (has_log_) sum += std::log1p(t);
      for (std::size_t p = 1; p < coefficients_.size(); ++p) {
        if (coefficients_[p] != 0.0) sum += coefficients_[p] * std::pow(s, -static_cast<double>(p));
      }
      return scale_ * sum + constant_;
    }
    if (has_log_) sum += log1p_derivative(t, order);
    const double sign = order % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t p = 1; p < coefficients_.size(); ++p) {
      if (coefficients_[p] == 0.0) continue;
      double rising = 1.0;
      for (int i = 0; i < order; ++i) rising *= static_cast<double>(p) + i;
      sum += sign * coefficients_[p] * rising * std::pow(s, -static_cast<double>(p) - order);
    }
    return scale_ * sum;
  }

  double scale_;
  bool has_log_;
  std::vector<cpp_int> exact_;
  std::vector<double> coefficients_;
  double constant_;
};

}  // namespace

std::shared_ptr<const RadialProfile> LogQuadraticProfile::exact_laplacian(int n, double scale) const {
  // a (log 2 − log s) + b t + c  ↦  −a L(log s) + 2n b
  const LaurentLogProfile log_part("log", max_order(), -log_coeff_, log_coeff_ != 0.0, {}, 0.0);
  return std::make_shared<LaurentLogProfile>("laplacian(" + name() + ")", max_order() - 2,
                                             scale * -log_coeff_, false, log_part.apply(n),
                                             scale * 2.0 * n * quad_coeff_);
}

ProfilePtr catalog_sphere_family(const DimensionContext& ctx, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sphere family requires 0 < alpha <= 1");
  std::ostringstream name;
  name << "sphere:" << alpha;
  return std::make_shared<LogQuadraticProfile>(name.str(), 0.5 * alpha, 0.0, 0.0, 2 * ctx.m);
}

ProfilePtr catalog_counterexample(const DimensionContext& ctx) {
  return std::make_shared<LogQuadraticProfile>("counterexample", 1.0, 1.0, 0.0, 2 * ctx.m);
}

ProfilePtr constant_profile(const DimensionContext& ctx, double c) {
  return std::make_shared<LogQuadraticProfile>("constant", 0.0, 0.0, c, 2 * ctx.m);
}

ProfilePtr square_profile(const DimensionContext& ctx) {
  return std::make_shared<LogQuadraticProfile>("square", 0.0, 1.0, 0.0, 2 * ctx.m);
}

ProfilePtr catalog_log_decay(const DimensionContext& ctx, double beta) {
  std::ostringstream name;
  name << "logdecay:" << beta;
  return std::make_shared<LogQuadraticProfile>(name.str(), 0.5 * beta, 0.0,
                                               -0.5 * beta * std::numbers::ln2, 2 * ctx.m);
}

ProfilePtr numeric_profile(const DimensionContext& ctx,
                           const std::vector<std::pair<double, double>>& samples) {
  const int degree = 2 * ctx.m + 1;
  if (static_cast<int>(samples.size()) < 2 * ctx.m + 3) {
    throw DomainError("numeric profile needs at least 2m+3 = " + std::to_string(2 * ctx.m + 3) +
                      " samples, got " + std::to_string(samples.size()));
  }
  std::vector<double> t, u;
  t.reserve(samples.size());
  u.reserve(samples.size());
  double previous = -1.0;
  for (const auto& [r, value] : samples) {
    if (!(r >= 0.0) || !(r > previous)) {
      throw DomainError("numeric profile radii must be >= 0 and strictly increasing");
    }
    if (!std::isfinite(value)) throw DomainError("numeric profile values must be finite");
    previous = r;
    t.push_back(r * r);
    u.push_back(value);
  }
  detail::InterpolatingBSpline spline(t, u, degree);
  return std::make_shared<NumericProfile>(std::move(spline), t.back(), 2 * ctx.m);
}

ProfilePtr load_profile_csv(const DimensionContext& ctx, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open profile file '" + path + "'");
  std::vector<std::pair<double, double>> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double r = 0.0, u = 0.0;
    if (!(fields >> r >> u)) {
      if (line_no == 1) continue;  // header
      throw DomainError("malformed profile row " + std::to_string(line_no) + " in '" + path + "'");
    }
    samples.emplace_back(r, u);
  }
  return numeric_profile(ctx, samples);
}

ProfilePtr profile_from_selector(const DimensionContext& ctx, const std::string& selector) {
  const auto colon = selector.find(':');
  const std::string kind = selector.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : selector.substr(colon + 1);
  auto number = [&]() {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) {
      throw DomainError("profile '" + selector + "' needs a numeric argument");
    }
    return value;
  };
  if (kind == "sphere") return catalog_sphere_family(ctx, number());
  if (kind == "counterexample" && arg.empty()) return catalog_counterexample(ctx);
  if (kind == "flat" && arg.empty()) return constant_profile(ctx, 0.0);
  if (kind == "logdecay") return catalog_log_decay(ctx, number());
  if (kind == "file" && !arg.empty()) return load_profile_csv(ctx, arg);
  throw DomainError("unknown profile selector '" + selector + "'");
}

double PerturbedField::envelope(double r) const {
  return amplitude * r / std::pow(1.0 + r * r, 0.5 * (decay_power + 1.0));
}

double PerturbedField::operator()(std::span<const double> x) const {
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  const double r = std::sqrt(r2);
  const double radial = base->eval(r, 0);
  if (amplitude == 0.0 || r == 0.0) return radial;
  // envelope(r) · x₁/r, written without the division.
  return radial + amplitude * x[0] / std::pow(1.0 + r2, 0.5 * (decay_power + 1.0));
}

PerturbedField make_perturbed(ProfilePtr base, double amplitude, double decay_power) {
  if (!base) throw DomainError("perturbed field needs a base profile");
  if (!(decay_power > 0.0)) throw DomainError("decay_power must be > 0");
  return {std::move(base), amplitude, decay_power};
}

}  // namespace qcurv
