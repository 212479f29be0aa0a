#pragma once

#include <optional>

#include "christoffel/christoffel.hpp"
#include "christoffel/geometry.hpp"

namespace christoffel {

// Constant-free lower and upper bound shapes for lambda_n(D, x).
struct BoundEstimate {
  int n = 0;
  double delta = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double lower_shape = 0.0;
  double upper_shape = 0.0;
  std::optional<double> lambda_exact;
  // delta >= beta/2: the lower shape comes from the inscribed disk around x
  // and is n^-2.
  bool deep_interior = false;

  double ratio_lower() const { return lambda_exact.value() / lower_shape; }
  double ratio_upper() const { return lambda_exact.value() / upper_shape; }
};

struct ConditionReport {
  double ratio_l1_l2_max = 1.0;
  double quasi_monotonicity_defect = 1.0;
  bool passes = false;
};

// n^-2 sqrt(delta) min_{i, t in grid} l_i(t)/sqrt(t). DeltaTooLarge unless
// delta < beta/2.
double lower_bound_shape(const SectionProfile& profile, int n);

// n^-2 sqrt(min{l_1(delta) l_2(delta), delta}).
double upper_bound_shape(const SectionProfile& profile, int n);

// Largest l1/l2 imbalance over the grid and the largest ratio
// (l_i(t1)/sqrt(t1)) / (l_i(t2)/sqrt(t2)) over grid pairs t1 <= t2.
// Both thresholds must exceed 1.
ConditionReport check_conditions(const SectionProfile& profile, double ratio_threshold,
                                 double monotonicity_threshold);

// c0(alpha) for alpha balls with 1 < alpha < 2. Otherwise half the width
// along u, capped by half the chord through x along u.
double default_beta(const ConvexBody& body, Vec2 x, Vec2 u);

inline constexpr double kDefaultSigma = 4.0;

// Profile, both shapes and the exact lambda_n(D, x). Requires
// sigma n^-2 < delta (TooCloseToBoundary otherwise); delta >= beta/2 takes
// the deep-interior branch.
BoundEstimate two_sided_report(const ConvexBody& body, Vec2 x, Vec2 u, int n, double beta,
                               double sigma, const ChristoffelEvaluator& evaluator,
                               int grid_size = kDefaultGridSize);

}  // namespace christoffel
