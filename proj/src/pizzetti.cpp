#include "qcurv/pizzetti.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qcurv/errors.hpp"

namespace qcurv {

Polynomial::Polynomial(int dim) : dim_(dim) {
  if (dim < 1) throw DomainError("polynomial dimension must be positive");
}

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  p.add_term(c, std::vector<int>(static_cast<std::size_t>(dim), 0));
  return p;
}

Polynomial Polynomial::coordinate(int dim, int axis) {
  if (axis < 0 || axis >= dim) throw DomainError("coordinate axis out of range");
  Polynomial p(dim);
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(axis)] = 1;
  p.add_term(1.0, e);
  return p;
}

Polynomial Polynomial::radius_squared(int dim) {
  Polynomial p(dim);
  for (int i = 0; i < dim; ++i) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    e[static_cast<std::size_t>(i)] = 2;
    p.add_term(1.0, e);
  }
  return p;
}

void Polynomial::add_term(double coefficient, const std::vector<int>& exponents) {
  if (coefficient == 0.0) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->exponents == exponents) {
      it->coefficient += coefficient;
      if (it->coefficient == 0.0) terms_.erase(it);
      return;
    }
  }
  terms_.push_back({coefficient, exponents});
}

double Polynomial::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_)) throw DomainError("polynomial point has wrong dimension");
  double sum = 0.0;
  for (const auto& t : terms_) {
    double value = t.coefficient;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int k = 0; k < t.exponents[i]; ++k) value *= x[i];
    }
    sum += value;
  }
  return sum;
}

Polynomial Polynomial::laplacian() const {
  Polynomial out(dim_);
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < t.exponents.size(); ++i) {
      const int e = t.exponents[i];
      if (e < 2) continue;
      auto exponents = t.exponents;
      exponents[i] -= 2;
      out.add_term(t.coefficient * e * (e - 1), exponents);
    }
  }
  return out;
}

Polynomial Polynomial::shifted(std::span<const double> shift) const {
  if (shift.size() != static_cast<std::size_t>(dim_)) throw DomainError("shift has wrong dimension");
  Polynomial out = constant(dim_, 0.0);
  for (const auto& t : terms_) {
    Polynomial product = constant(dim_, t.coefficient);
    for (int i = 0; i < dim_; ++i) {
      Polynomial factor = coordinate(dim_, i) + constant(dim_, shift[static_cast<std::size_t>(i)]);
      for (int k = 0; k < t.exponents[static_cast<std::size_t>(i)]; ++k) product = product * factor;
    }
    out = out + product;
  }
  return out;
}

int Polynomial::degree() const {
  int best = 0;
  for (const auto& t : terms_) {
    int d = 0;
    for (int e : t.exponents) d += e;
    best = std::max(best, d);
  }
  return best;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.dim_ != dim_) throw DomainError("polynomial dimensions differ");
  Polynomial out = *this;
  for (const auto& t : other.terms_) out.add_term(t.coefficient, t.exponents);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.dim_ != dim_) throw DomainError("polynomial dimensions differ");
  Polynomial out(dim_);
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      std::vector<int> e(a.exponents.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exponents[i] + b.exponents[i];
      out.add_term(a.coefficient * b.coefficient, e);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double scale) const {
  Polynomial out(dim_);
  for (const auto& t : terms_) out.add_term(t.coefficient * scale, t.exponents);
  return out;
}

PolyharmonicTestFn make_test_fn(std::string name, const Polynomial& p) {
  std::vector<Polynomial> powers{p};
  while (!powers.back().is_zero()) powers.push_back(powers.back().laplacian());
  PolyharmonicTestFn h;
  h.name = std::move(name);
  h.degree_of_polyharmonicity = std::max(1, static_cast<int>(powers.size()) - 1);
  h.eval = [p](std::span<const double> x) { return p(x); };
  h.laplacian_powers_at = [powers](std::span<const double> x0, int i) {
    if (i < 0) throw DomainError("negative Laplacian power");
    if (static_cast<std::size_t>(i) >= powers.size()) return 0.0;
    return powers[static_cast<std::size_t>(i)](x0);
  };
  return h;
}

double pizzetti_prediction(const DimensionContext& ctx, const PolyharmonicTestFn& h,
                           std::span<const double> x0, double radius) {
  if (x0.size() != static_cast<std::size_t>(ctx.n)) throw DomainError("x0 has wrong dimension");
  if (!(radius > 0.0)) throw DomainError("Pizzetti radius must be positive");
  if (h.degree_of_polyharmonicity > ctx.m) {
    throw OrderError("test function is not polyharmonic of order <= m");
  }
  double sum = 0.0;
  for (int i = 0; i < ctx.m; ++i) {
    sum += ctx.pizzetti[static_cast<std::size_t>(i)] * std::pow(radius, 2 * i) * h.laplacian_powers_at(x0, i);
  }
  return sum;
}

double pizzetti_verify(const DimensionContext& ctx, const PolyharmonicTestFn& h,
                       std::span<const double> x0, double radius, const QuadratureSpec& spec) {
  const double prediction = pizzetti_prediction(ctx, h, x0, radius);
  std::vector<double> point(x0.size());
  const DirectionFn shifted = [&](std::span<const double> y) {
    for (std::size_t i = 0; i < point.size(); ++i) point[i] = x0[i] + y[i];
    return h.eval(point);
  };
  const double volume = ctx.omega_n_minus_1 * std::pow(radius, ctx.n) / ctx.n;
  const double average = ball_integral(ctx, shifted, radius, spec) / volume;
  return std::abs(prediction - average);
}

std::vector<PolyharmonicTestFn> pizzetti_generators(const DimensionContext& ctx) {
  const int n = ctx.n;
  const Polynomial one = Polynomial::constant(n, 1.0);
  const Polynomial x1 = Polynomial::coordinate(n, 0);
  const Polynomial x2 = Polynomial::coordinate(n, 1);
  const Polynomial r2 = Polynomial::radius_squared(n);
  std::vector<PolyharmonicTestFn> out{
      make_test_fn("1", one),
      make_test_fn("x1", x1),
      make_test_fn("x1*x2", x1 * x2),
      make_test_fn("|x|^2", r2),
      make_test_fn("|x|^2*x1", r2 * x1),
  };
  if (ctx.m >= 3) {
    out.push_back(make_test_fn("|x|^4", r2 * r2));
    out.push_back(make_test_fn("|x|^4*x1", r2 * r2 * x1));
  }
  return out;
}

}  // namespace qcurv
