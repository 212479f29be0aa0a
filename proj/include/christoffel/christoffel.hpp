#pragma once

#include <vector>

#include "christoffel/geometry.hpp"
#include "christoffel/moments.hpp"
#include "christoffel/precision.hpp"

namespace christoffel {

// Supported polynomial degree range for kernel evaluation.
inline constexpr int kMaxDegree = 30;

// lambda_n(D, x) = 1 / (m(x)^T G^-1 m(x)) with G the monomial Gram matrix
// and m(x) the graded-lex monomial vector. G = L L^T is factored once in
// extended precision.
class ChristoffelEvaluator {
 public:
  // Throws FactorizationFailure if G is not numerically positive definite.
  explicit ChristoffelEvaluator(GramMatrix gram);

  // Moments from moments_for(); n <= kMaxDegree.
  static ChristoffelEvaluator for_body(const ConvexBody& body, int n, double tol = 1e-12);

  int degree() const { return gram_.degree(); }
  int dim() const { return gram_.dim(); }
  const GramMatrix& gram() const { return gram_; }

  // Solves L z = m(x).
  std::vector<Real> forward_solve(const std::vector<Real>& rhs) const;
  // Solves L^T c = z.
  std::vector<Real> backward_solve(const std::vector<Real>& rhs) const;

  // max |L L^T - G| / max |G|.
  Real factor_residual() const;

 private:
  const Real& factor(int r, int c) const {
    return factor_[static_cast<std::size_t>(r) * static_cast<std::size_t>(gram_.dim()) +
                   static_cast<std::size_t>(c)];
  }

  GramMatrix gram_;
  std::vector<Real> factor_;  // lower triangle, row-major
};

struct Evaluation {
  Vec2 point;
  int n = 0;
  double lambda = 0.0;
  double kernel_diag = 0.0;  // K_n(x, x) = 1 / lambda
  Real lambda_exact;
};

// Defined for every x (points outside D included).
Evaluation evaluate(const ChristoffelEvaluator& ev, Vec2 x);

// Graded-lex coefficients of f* = K_n(x, .) / K_n(x, x), the minimizer of
// the integral of f^2 over degree-n polynomials with f(x) = 1.
std::vector<Real> minimizer_polynomial(const ChristoffelEvaluator& ev, Vec2 x);

// Monomials of degree <= n at x in graded-lex order.
std::vector<Real> monomial_vector(int n, Vec2 x);
Real polynomial_value(const std::vector<Real>& coeffs, int n, Vec2 x);
// c^T G c, the integral of the square of the polynomial with coefficients c.
Real integral_of_square(const GramMatrix& gram, const std::vector<Real>& coeffs);

// n^-2 sqrt(1 - |x|^2); TooCloseToBoundary when 1 - |x|^2 < sigma n^-2.
double disk_reference_shape(int n, Vec2 x, double sigma = 4.0);

}  // namespace christoffel
