#include "christoffel/christoffel.hpp"

#include <cmath>
#include <stdexcept>

#include "christoffel/errors.hpp"

namespace christoffel {

ChristoffelEvaluator::ChristoffelEvaluator(GramMatrix gram) : gram_(std::move(gram)) {
  use_working_precision();
  const int dim = gram_.dim();
  const auto d = static_cast<std::size_t>(dim);
  factor_.assign(d * d, Real(0));
  Real acc;
  Real prod;
  for (int j = 0; j < dim; ++j) {
    acc = gram_(j, j);
    for (int k = 0; k < j; ++k) {
      prod = factor(j, k);
      prod *= factor(j, k);
      acc -= prod;
    }
    if (!(acc > 0))
      throw FactorizationFailure("Gram matrix is not positive definite at working precision");
    Real& diag = factor_[static_cast<std::size_t>(j) * d + static_cast<std::size_t>(j)];
    diag = sqrt(acc);
    for (int i = j + 1; i < dim; ++i) {
      acc = gram_(i, j);
      for (int k = 0; k < j; ++k) {
        prod = factor(i, k);
        prod *= factor(j, k);
        acc -= prod;
      }
      factor_[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(j)] = acc / diag;
    }
  }
}

ChristoffelEvaluator ChristoffelEvaluator::for_body(const ConvexBody& body, int n, double tol) {
  if (n < 0 || n > kMaxDegree) throw std::invalid_argument("degree must be in [0, 30]");
  return ChristoffelEvaluator(gram_matrix(moments_for(body, n, tol), n));
}

std::vector<Real> ChristoffelEvaluator::forward_solve(const std::vector<Real>& rhs) const {
  const int dim = gram_.dim();
  if (rhs.size() != static_cast<std::size_t>(dim)) throw std::invalid_argument("size mismatch");
  std::vector<Real> z(rhs);
  Real prod;
  for (int i = 0; i < dim; ++i) {
    Real& zi = z[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) {
      prod = factor(i, k);
      prod *= z[static_cast<std::size_t>(k)];
      zi -= prod;
    }
    zi /= factor(i, i);
  }
  return z;
}

std::vector<Real> ChristoffelEvaluator::backward_solve(const std::vector<Real>& rhs) const {
  const int dim = gram_.dim();
  if (rhs.size() != static_cast<std::size_t>(dim)) throw std::invalid_argument("size mismatch");
  std::vector<Real> c(rhs);
  Real prod;
  for (int i = dim - 1; i >= 0; --i) {
    Real& ci = c[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < dim; ++k) {
      prod = factor(k, i);
      prod *= c[static_cast<std::size_t>(k)];
      ci -= prod;
    }
    ci /= factor(i, i);
  }
  return c;
}

Real ChristoffelEvaluator::factor_residual() const {
  const int dim = gram_.dim();
  Real worst = 0;
  Real scale = 0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      Real acc = 0;
      for (int k = 0; k <= j; ++k) acc += factor(i, k) * factor(j, k);
      worst = std::max(worst, Real(abs(acc - gram_(i, j))));
      scale = std::max(scale, Real(abs(gram_(i, j))));
    }
  }
  return worst / scale;
}

std::vector<Real> monomial_vector(int n, Vec2 x) {
  use_working_precision();
  const Real px(x.x);
  const Real py(x.y);
  std::vector<Real> xs(static_cast<std::size_t>(n) + 1);
  std::vector<Real> ys(static_cast<std::size_t>(n) + 1);
  xs[0] = 1;
  ys[0] = 1;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    xs[k] = xs[k - 1] * px;
    ys[k] = ys[k - 1] * py;
  }
  std::vector<Real> m;
  m.reserve(static_cast<std::size_t>(basis_size(n)));
  for (const auto& [i, j] : monomial_exponents(n))
    m.push_back(xs[static_cast<std::size_t>(i)] * ys[static_cast<std::size_t>(j)]);
  return m;
}

Real polynomial_value(const std::vector<Real>& coeffs, int n, Vec2 x) {
  const std::vector<Real> m = monomial_vector(n, x);
  if (coeffs.size() != m.size()) throw std::invalid_argument("coefficient count mismatch");
  Real acc = 0;
  for (std::size_t k = 0; k < m.size(); ++k) acc += coeffs[k] * m[k];
  return acc;
}

Real integral_of_square(const GramMatrix& gram, const std::vector<Real>& coeffs) {
  const int dim = gram.dim();
  if (coeffs.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("coefficient count mismatch");
  Real acc = 0;
  for (int r = 0; r < dim; ++r) {
    Real row = 0;
    for (int c = 0; c < dim; ++c) row += gram(r, c) * coeffs[static_cast<std::size_t>(c)];
    acc += coeffs[static_cast<std::size_t>(r)] * row;
  }
  return acc;
}

Evaluation evaluate(const ChristoffelEvaluator& ev, Vec2 x) {
  const std::vector<Real> z = ev.forward_solve(monomial_vector(ev.degree(), x));
  Real kernel = 0;
  for (const Real& zi : z) kernel += zi * zi;
  Evaluation out;
  out.point = x;
  out.n = ev.degree();
  out.lambda_exact = 1 / kernel;
  out.lambda = out.lambda_exact.convert_to<double>();
  out.kernel_diag = kernel.convert_to<double>();
  return out;
}

std::vector<Real> minimizer_polynomial(const ChristoffelEvaluator& ev, Vec2 x) {
  const std::vector<Real> z = ev.forward_solve(monomial_vector(ev.degree(), x));
  Real kernel = 0;
  for (const Real& zi : z) kernel += zi * zi;
  std::vector<Real> c = ev.backward_solve(z);
  for (Real& ci : c) ci /= kernel;
  return c;
}

double disk_reference_shape(int n, Vec2 x, double sigma) {
  if (n < 1) throw std::invalid_argument("degree n must be >= 1");
  const double nn = static_cast<double>(n);
  const double gap = 1.0 - dot(x, x);
  if (gap < sigma / (nn * nn)) throw TooCloseToBoundary("1 - |x|^2 is below sigma n^-2");
  return std::sqrt(gap) / (nn * nn);
}

}  // namespace christoffel
