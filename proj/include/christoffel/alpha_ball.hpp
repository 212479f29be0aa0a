#pragma once

#include "christoffel/geometry.hpp"

namespace christoffel {

// Closed-form machinery for B_alpha = {|x|^alpha + |y|^alpha <= 1},
// 1 < alpha < 2. The upper boundary arc is y = f(x) = (1 - |x|^alpha)^(1/alpha).
struct AlphaBall {
  double alpha = 1.5;
  // Cutoff below which the two-sided section estimate is used.
  double c0 = 0.0;
  // Zero of f''' on (0, 1): ((2 - alpha)/(1 + alpha))^(1/alpha).
  double c1 = 0.0;

  // Throws OutOfRange unless 1 < alpha < 2.
  explicit AlphaBall(double alpha);

  // 2^(-1/alpha), abscissa of the diagonal boundary point.
  double diagonal() const;
  ConvexBody body() const;
};

// Largest t for which every section line through (x0, f(x0)) - t u still
// meets the upper arc at both ends: (2^(1 - 1/alpha) - 1)/sqrt(3).
double section_line_limit(double alpha);

// min{0.1, 0.9 * min{section_line_limit(alpha), 1 - 2^(-1/alpha)}}.
double cutoff_c0(double alpha);

struct BoundaryDerivatives {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// f(x); OutOfRange if |x| > 1.
double boundary_f(double alpha, double x);
// f, f', f'', f''' at x. At x = 0 the second and third derivatives are
// infinite for alpha < 2; at |x| = 1 the first one is.
BoundaryDerivatives boundary_derivatives(double alpha, double x);
// Inverse of f on [0, 1]; OutOfRange if y is outside [0, 1].
double f_inverse(double alpha, double y);

// A boundary point in the canonical octant 0 <= x0 <= y0 together with the
// outward normal u and the tangent v (positive x-component), plus the same
// foot and normal expressed in the frame of the original query point.
struct AlphaBallPoint {
  double x0 = 0.0;
  double y0 = 1.0;
  Vec2 u{0.0, 1.0};
  Vec2 v{1.0, 0.0};
  double delta = 0.0;
  Vec2 foot{0.0, 1.0};
  Vec2 normal{0.0, 1.0};
};

// Boundary point with abscissa x0 in [0, 2^(-1/alpha)]; delta is left at 0.
AlphaBallPoint boundary_point(const AlphaBall& ball, double x0);

// Foot of the perpendicular from an interior x, found from the first-order
// condition on the canonical arc; ConvergenceFailure when the residual stays
// above 1e-10.
AlphaBallPoint nearest_boundary_point_exact(const AlphaBall& ball, Vec2 x);

// t^(1/2) * max{t, x0^alpha}^(1/alpha - 1/2), valid for 0 < t <= c0.
double li_closed_form(const AlphaBall& ball, double x0, double t);

struct ParabolaRoots {
  double minus = 0.0;
  double plus = 0.0;
};

// Intersections of the line with slope `slope` through (x0, f(x0)) lowered
// by t sqrt(1 + slope^2) and the tangent parabola with curvature m < 0.
ParabolaRoots parabola_line_roots(double x0, double slope, double m, double t);
ParabolaRoots tangent_parabola_roots(const AlphaBall& ball, double x0, double m, double t);

// P(m, x) = f(x0) + f'(x0)(x - x0) + m/2 (x - x0)^2.
double tangent_parabola(const AlphaBall& ball, double x0, double m, double x);

// l(x) = f(x0) + f'(x0)(x - x0) - t sqrt(1 + f'(x0)^2).
double section_line(const AlphaBall& ball, double x0, double t, double x);
// x1 = x0 + t f'(x0)/sqrt(1 + f'(x0)^2), abscissa of (x0, y0) - t u.
double section_anchor_x(const AlphaBall& ball, double x0, double t);

struct SectionEndpoints {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  // sqrt(1 + f'(x0)^2) (x1 - x2) and sqrt(1 + f'(x0)^2) (x3 - x1).
  double l1 = 0.0;
  double l2 = 0.0;
};

// Both intersections of y = l(x) with the upper arc, by bisection on
// [-1, x1] and [x1, 1]. Requires 0 <= x0 <= 2^(-1/alpha), 0 < t <= c0.
SectionEndpoints section_endpoints(const AlphaBall& ball, double x0, double t);

// n^-2 delta^(1/2) max{delta, x0^alpha}^(1/alpha - 1/2) without any checks.
double prediction_shape(const AlphaBall& ball, double x0, double delta, int n);

// prediction_shape at the exact nearest boundary point of x. Throws
// TooCloseToBoundary when delta < sigma n^-2.
double christoffel_prediction(const AlphaBall& ball, Vec2 x, int n, double sigma);

}  // namespace christoffel
