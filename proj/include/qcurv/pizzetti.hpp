#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qcurv/dimension.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv {

// Polynomial on ℝⁿ in flat monomial form.
class Polynomial {
 public:
  struct Term {
    double coefficient;
    std::vector<int> exponents;
  };

  explicit Polynomial(int dim);
  static Polynomial constant(int dim, double c);
  static Polynomial coordinate(int dim, int axis);  // x_axis
  static Polynomial radius_squared(int dim);        // |x|²

  int dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(std::span<const double> x) const;
  Polynomial laplacian() const;
  Polynomial shifted(std::span<const double> shift) const;  // x ↦ p(x + shift)
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double scale) const;

 private:
  void add_term(double coefficient, const std::vector<int>& exponents);
  int dim_;
  std::vector<Term> terms_;
};

struct PolyharmonicTestFn {
  std::string name;
  std::function<double(std::span<const double>)> eval;
  std::function<double(std::span<const double>, int)> laplacian_powers_at;  // exact Δ^i h(x0)
  int degree_of_polyharmonicity = 1;  // m′ with Δ^{m′} h ≡ 0
};

PolyharmonicTestFn make_test_fn(std::string name, const Polynomial& p);

// Σ_{i<m} c_i R^{2i} Δ^i h(x0). Throws OrderError when h is not m-polyharmonic.
double pizzetti_prediction(const DimensionContext& ctx, const PolyharmonicTestFn& h,
                           std::span<const double> x0, double radius);

// |prediction − ball average of h over B_R(x0)|.
double pizzetti_verify(const DimensionContext& ctx, const PolyharmonicTestFn& h,
                       std::span<const double> x0, double radius, const QuadratureSpec& spec = {});

// {1, x₁, x₁x₂, |x|², |x|² x₁}, plus |x|⁴ and |x|⁴ x₁ when m ≥ 3.
std::vector<PolyharmonicTestFn> pizzetti_generators(const DimensionContext& ctx);

}  // namespace qcurv
