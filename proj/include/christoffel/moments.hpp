#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

#include "christoffel/geometry.hpp"
#include "christoffel/precision.hpp"

namespace christoffel {

// Uniform-measure moments m(i, j) = integral over D of x^i y^j for all
// i + j <= 2 * max_total_degree, enough for the Gram matrix of degree
// max_total_degree.
class MomentTable {
 public:
  explicit MomentTable(int max_total_degree);

  int max_total_degree() const { return degree_; }
  int max_moment_degree() const { return 2 * degree_; }

  const Real& operator()(int i, int j) const { return values_[index(i, j)]; }
  Real& at(int i, int j) { return values_[index(i, j)]; }

  // Position of (i, j) in graded order: total degree first, then x-power
  // descending.
  static std::size_t index(int i, int j) {
    const auto s = static_cast<std::size_t>(i + j);
    return s * (s + 1) / 2 + static_cast<std::size_t>(j);
  }

  // {"degree": n, "moments": [[i, j, "decimal-string"], ...]}.
  nlohmann::json to_json(int digits = 60) const;
  static MomentTable from_json(const nlohmann::json& j);

 private:
  int degree_;
  std::vector<Real> values_;
};

// Largest supported max_total_degree for the closed forms.
inline constexpr int kMaxMomentDegree = 64;

// Unit disk: integral of x^2a y^2b = G(a+1/2) G(b+1/2) / G(a+b+2).
MomentTable disk_moments(int max_degree);

// B_alpha: integral of x^2a y^2b = (4/alpha^2) G((2a+1)/alpha) G((2b+1)/alpha)
// / G((2a+2b+2)/alpha + 1). Valid for any alpha >= 1; alpha = 2 is the disk.
MomentTable alpha_ball_moments(double alpha, int max_degree);

struct QuadratureStats {
  int panels = 0;
  double achieved = 0.0;  // max relative error estimate over all moments
};

// Vertical slicing: Gauss-Kronrod 7/15 panels over x, exact monomial
// integrals over each chord [y_low(x), y_high(x)] located by membership
// bisection. One panel partition serves every moment, so the table is the
// exact moment table of a positive discrete-in-x measure. Panels are split
// until the summed |K15 - G7| of every moment is at most tol times the
// integral of |x|^i |y|^j. tol >= 1e-12; NonConvergence reports the
// achieved error when refinement stalls.
MomentTable quadrature_moments(const ConvexBody& body, int max_degree, double tol = 1e-12,
                               QuadratureStats* stats = nullptr);

// Closed form for the disk and alpha balls, quadrature otherwise.
MomentTable moments_for(const ConvexBody& body, int max_degree, double tol = 1e-12);

// Exponents (i, j) of the graded-lexicographic monomial basis of degree <= n:
// 1, x, y, x^2, xy, y^2, ...
std::vector<std::pair<int, int>> monomial_exponents(int n);

inline int basis_size(int n) { return (n + 1) * (n + 2) / 2; }

// Symmetric positive definite matrix of monomial inner products.
class GramMatrix {
 public:
  GramMatrix(int n, std::vector<Real> entries);

  int degree() const { return n_; }
  int dim() const { return dim_; }
  const Real& operator()(int r, int c) const {
    return entries_[static_cast<std::size_t>(r) * dim_ + static_cast<std::size_t>(c)];
  }

 private:
  int n_;
  int dim_;
  std::vector<Real> entries_;
};

// InsufficientMoments when the table is shallower than n.
GramMatrix gram_matrix(const MomentTable& moments, int n);

}  // namespace christoffel
