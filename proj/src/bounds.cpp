#include "christoffel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "christoffel/alpha_ball.hpp"
#include "christoffel/errors.hpp"

namespace christoffel {
namespace {

double inverse_square(int n) {
  if (n < 1) throw std::invalid_argument("degree n must be >= 1");
  const double nn = static_cast<double>(n);
  return 1.0 / (nn * nn);
}

bool in_range(const SectionProfile& p, double t) {
  // Grid endpoints are exact copies of delta/2 and beta.
  return t >= std::min(p.delta / 2.0, p.beta) && t <= std::max(p.delta / 2.0, p.beta);
}

}  // namespace

double lower_bound_shape(const SectionProfile& profile, int n) {
  if (!(profile.delta < profile.beta / 2.0))
    throw DeltaTooLarge("lower bound shape needs delta < beta/2");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < profile.t_grid.size(); ++k) {
    const double t = profile.t_grid[k];
    if (!in_range(profile, t)) continue;
    best = std::min({best, profile.l1[k] / std::sqrt(t), profile.l2[k] / std::sqrt(t)});
  }
  return inverse_square(n) * std::sqrt(profile.delta) * best;
}

double upper_bound_shape(const SectionProfile& profile, int n) {
  const double product = profile.at_delta.l1 * profile.at_delta.l2;
  return inverse_square(n) * std::sqrt(std::min(product, profile.delta));
}

ConditionReport check_conditions(const SectionProfile& profile, double ratio_threshold,
                                 double monotonicity_threshold) {
  if (!(ratio_threshold > 1.0) || !(monotonicity_threshold > 1.0))
    throw std::invalid_argument("condition thresholds must exceed 1");
  ConditionReport report;
  std::vector<double> g1;
  std::vector<double> g2;
  for (std::size_t k = 0; k < profile.t_grid.size(); ++k) {
    const double t = profile.t_grid[k];
    if (!in_range(profile, t)) continue;
    const double a = profile.l1[k];
    const double b = profile.l2[k];
    if (a > 0.0 && b > 0.0)
      report.ratio_l1_l2_max = std::max({report.ratio_l1_l2_max, a / b, b / a});
    else if (a > 0.0 || b > 0.0)
      report.ratio_l1_l2_max = std::numeric_limits<double>::infinity();
    g1.push_back(a / std::sqrt(t));
    g2.push_back(b / std::sqrt(t));
  }
  // Ascending t: compare each value against the minimum to its right.
  for (const auto* g : {&g1, &g2}) {
    double tail_min = std::numeric_limits<double>::infinity();
    for (auto it = g->rbegin(); it != g->rend(); ++it) {
      tail_min = std::min(tail_min, *it);
      if (tail_min > 0.0)
        report.quasi_monotonicity_defect = std::max(report.quasi_monotonicity_defect, *it / tail_min);
      else if (*it > 0.0)
        report.quasi_monotonicity_defect = std::numeric_limits<double>::infinity();
    }
  }
  report.passes = report.ratio_l1_l2_max < ratio_threshold &&
                  report.quasi_monotonicity_defect < monotonicity_threshold;
  return report;
}

double default_beta(const ConvexBody& body, Vec2 x, Vec2 u) {
  if (body.kind() == BodyKind::alpha_ball && body.alpha() > 1.0 && body.alpha() < 2.0)
    return cutoff_c0(body.alpha());
  u = normalized(u);
  // Anchors x + (delta - t) u must stay inside for t <= beta.
  const double chord = ray_extent(body, x, u) + ray_extent(body, x, -u);
  return 0.5 * std::min(width_along(body, u), chord);
}

BoundEstimate two_sided_report(const ConvexBody& body, Vec2 x, Vec2 u, int n, double beta,
                               double sigma, const ChristoffelEvaluator& evaluator,
                               int grid_size) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (evaluator.degree() != n) throw std::invalid_argument("evaluator degree differs from n");
  const SectionProfile profile = section_profile(body, RayConfig::toward(x, u), beta, grid_size);
  BoundEstimate est;
  est.n = n;
  est.delta = profile.delta;
  est.beta = beta;
  est.sigma = sigma;
  if (profile.delta <= sigma * inverse_square(n))
    throw TooCloseToBoundary("delta must exceed sigma n^-2");
  est.deep_interior = !(profile.delta < beta / 2.0);
  est.lower_shape = est.deep_interior ? inverse_square(n) : lower_bound_shape(profile, n);
  est.upper_shape = upper_bound_shape(profile, n);
  est.lambda_exact = evaluate(evaluator, x).lambda;
  return est;
}

}  // namespace christoffel
