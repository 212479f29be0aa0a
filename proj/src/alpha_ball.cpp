#include "christoffel/alpha_ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "christoffel/errors.hpp"

namespace christoffel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_pos(double x, double a) { return x == 0.0 ? 0.0 : std::exp(a * std::log(x)); }

// Bisection on a sign change h(lo) and h(hi) of opposite signs, down to
// adjacent doubles or `max_iter` halvings.
template <class F>
double bisect(F&& h, double lo, double hi, int max_iter = 200) {
  const bool lo_positive = h(lo) > 0.0;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi)) break;
    if ((h(mid) > 0.0) == lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void check_x0(const AlphaBall& ball, double x0) {
  if (!(x0 >= 0.0) || x0 > ball.diagonal() * (1.0 + 1e-12))
    throw OutOfRange("x0 must lie in [0, 2^(-1/alpha)]");
}

}  // namespace

AlphaBall::AlphaBall(double a) : alpha(a) {
  if (!(a > 1.0 && a < 2.0)) throw OutOfRange("alpha must satisfy 1 < alpha < 2");
  c0 = cutoff_c0(a);
  c1 = std::pow((2.0 - a) / (1.0 + a), 1.0 / a);
}

double AlphaBall::diagonal() const { return std::pow(2.0, -1.0 / alpha); }

ConvexBody AlphaBall::body() const { return ConvexBody::alpha_ball(alpha); }

double section_line_limit(double alpha) {
  return (std::pow(2.0, 1.0 - 1.0 / alpha) - 1.0) / std::sqrt(3.0);
}

double cutoff_c0(double alpha) {
  const double pole_limit = 1.0 - std::pow(2.0, -1.0 / alpha);
  return std::min(0.1, 0.9 * std::min(section_line_limit(alpha), pole_limit));
}

double boundary_f(double alpha, double x) {
  if (!(std::abs(x) <= 1.0)) throw OutOfRange("boundary_f needs |x| <= 1");
  return pow_pos(1.0 - pow_pos(std::abs(x), alpha), 1.0 / alpha);
}

BoundaryDerivatives boundary_derivatives(double alpha, double x) {
  const double ax = std::abs(x);
  if (!(ax <= 1.0)) throw OutOfRange("boundary_derivatives needs |x| <= 1");
  const double sign = x < 0.0 ? -1.0 : 1.0;
  BoundaryDerivatives d;
  d.f = boundary_f(alpha, x);
  if (ax == 0.0) {
    d.d1 = 0.0;
    d.d2 = alpha < 2.0 ? -kInf : -(alpha - 1.0);
    d.d3 = alpha < 2.0 ? kInf : 0.0;
    return d;
  }
  if (ax == 1.0) {
    d.d1 = -sign * kInf;
    d.d2 = -kInf;
    d.d3 = -sign * kInf;
    return d;
  }
  const double xa = pow_pos(ax, alpha);
  const double rest = 1.0 - xa;
  const double inv = 1.0 / alpha;
  d.d1 = -sign * pow_pos(ax, alpha - 1.0) * pow_pos(rest, inv - 1.0);
  d.d2 = -(alpha - 1.0) * pow_pos(ax, alpha - 2.0) * pow_pos(rest, inv - 2.0);
  d.d3 = -sign * (alpha - 1.0) * pow_pos(ax, alpha - 3.0) * pow_pos(rest, inv - 3.0) *
         ((alpha - 2.0) + (alpha + 1.0) * xa);
  return d;
}

double f_inverse(double alpha, double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw OutOfRange("f_inverse needs 0 <= y <= 1");
  return pow_pos(1.0 - pow_pos(y, alpha), 1.0 / alpha);
}

AlphaBallPoint boundary_point(const AlphaBall& ball, double x0) {
  check_x0(ball, x0);
  x0 = std::min(x0, ball.diagonal());
  const double slope = boundary_derivatives(ball.alpha, x0).d1;
  const double len = std::sqrt(1.0 + slope * slope);
  AlphaBallPoint p;
  p.x0 = x0;
  p.y0 = boundary_f(ball.alpha, x0);
  p.u = {-slope / len, 1.0 / len};
  p.v = {1.0 / len, slope / len};
  p.foot = {p.x0, p.y0};
  p.normal = p.u;
  return p;
}

AlphaBallPoint nearest_boundary_point_exact(const AlphaBall& ball, Vec2 x) {
  if (!ball.body().contains(x)) throw PointOutsideDomain("point is outside B_alpha");

  // Reduce to 0 <= px <= py by the dihedral symmetry of B_alpha.
  const double sx = x.x < 0.0 ? -1.0 : 1.0;
  const double sy = x.y < 0.0 ? -1.0 : 1.0;
  const bool swapped = std::abs(x.x) > std::abs(x.y);
  const double px = std::min(std::abs(x.x), std::abs(x.y));
  const double py = std::max(std::abs(x.x), std::abs(x.y));
  const auto to_original = [&](Vec2 w) {
    if (swapped) std::swap(w.x, w.y);
    return Vec2{sx * w.x, sy * w.y};
  };

  const double alpha = ball.alpha;
  const double s_diag = ball.diagonal();
  // Cross product of (p - foot) with the normal direction (-f', 1).
  const auto residual = [&](double s) {
    const BoundaryDerivatives d = boundary_derivatives(alpha, s);
    return (px - s) + (py - d.f) * d.d1;
  };
  const auto distance = [&](double s) {
    return std::hypot(px - s, py - boundary_f(alpha, s));
  };

  // Scan with a grid dense near the pole, where the curvature blows up.
  std::vector<double> grid = geometric_grid(1e-13 * s_diag, s_diag, 160);
  for (int k = 1; k < 64; ++k) grid.push_back(s_diag * k / 64.0);
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double best_s = 0.0;
  double best_d = distance(0.0);
  if (distance(s_diag) < best_d) {
    best_s = s_diag;
    best_d = distance(s_diag);
  }
  double prev_s = grid.front();
  double prev_g = residual(prev_s);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double s = grid[k];
    const double g = residual(s);
    if ((prev_g > 0.0 && g <= 0.0) || (prev_g < 0.0 && g >= 0.0)) {
      const double root = g == 0.0 ? s : bisect(residual, prev_s, s);
      const double d = distance(root);
      if (d < best_d) {
        best_d = d;
        best_s = root;
      }
    }
    prev_s = s;
    prev_g = g;
  }

  const double scale = std::max(1.0, std::abs(boundary_derivatives(alpha, best_s).d1));
  if (best_s > 0.0 && best_s < s_diag && std::abs(residual(best_s)) > 1e-10 * scale)
    throw ConvergenceFailure("nearest boundary point did not converge");

  AlphaBallPoint p = boundary_point(ball, best_s);
  p.delta = best_d;
  p.foot = to_original({p.x0, p.y0});
  p.normal = to_original(p.u);
  return p;
}

double li_closed_form(const AlphaBall& ball, double x0, double t) {
  check_x0(ball, x0);
  if (!(t > 0.0) || t > ball.c0) throw OutOfRange("li_closed_form needs 0 < t <= c0");
  const double a = ball.alpha;
  return std::sqrt(t) * pow_pos(std::max(t, pow_pos(x0, a)), 1.0 / a - 0.5);
}

ParabolaRoots parabola_line_roots(double x0, double slope, double m, double t) {
  if (!(m < 0.0)) throw NonNegativeCurvature("tangent parabola needs m < 0");
  if (!(t > 0.0)) throw OutOfRange("parabola roots need t > 0");
  const double half = std::sqrt(2.0 * t * std::sqrt(1.0 + slope * slope) / (-m));
  return {x0 - half, x0 + half};
}

ParabolaRoots tangent_parabola_roots(const AlphaBall& ball, double x0, double m, double t) {
  if (!(x0 > 0.0 && x0 < 1.0)) throw OutOfRange("tangent parabola needs 0 < x0 < 1");
  return parabola_line_roots(x0, boundary_derivatives(ball.alpha, x0).d1, m, t);
}

double tangent_parabola(const AlphaBall& ball, double x0, double m, double x) {
  const BoundaryDerivatives d = boundary_derivatives(ball.alpha, x0);
  const double dx = x - x0;
  return d.f + d.d1 * dx + 0.5 * m * dx * dx;
}

double section_line(const AlphaBall& ball, double x0, double t, double x) {
  const BoundaryDerivatives d = boundary_derivatives(ball.alpha, x0);
  return d.f + d.d1 * (x - x0) - t * std::sqrt(1.0 + d.d1 * d.d1);
}

double section_anchor_x(const AlphaBall& ball, double x0, double t) {
  const double slope = boundary_derivatives(ball.alpha, x0).d1;
  return x0 + t * slope / std::sqrt(1.0 + slope * slope);
}

SectionEndpoints section_endpoints(const AlphaBall& ball, double x0, double t) {
  check_x0(ball, x0);
  if (!(t > 0.0) || t > ball.c0) throw OutOfRange("section_endpoints needs 0 < t <= c0");
  const double alpha = ball.alpha;
  const double slope = boundary_derivatives(alpha, x0).d1;
  const double stretch = std::sqrt(1.0 + slope * slope);
  const auto gap = [&](double x) {
    return section_line(ball, x0, t, x) - boundary_f(alpha, x);
  };

  SectionEndpoints e;
  e.x1 = section_anchor_x(ball, x0, t);
  if (!(gap(e.x1) < 0.0) || !(gap(-1.0) > 0.0) || !(gap(1.0) > 0.0))
    throw BracketFailure("section line does not cross the upper arc twice");
  e.x2 = bisect(gap, -1.0, e.x1);
  e.x3 = bisect(gap, e.x1, 1.0);
  e.l1 = stretch * (e.x1 - e.x2);
  e.l2 = stretch * (e.x3 - e.x1);
  return e;
}

double prediction_shape(const AlphaBall& ball, double x0, double delta, int n) {
  const double a = ball.alpha;
  const double nn = static_cast<double>(n);
  return std::sqrt(delta) * pow_pos(std::max(delta, pow_pos(x0, a)), 1.0 / a - 0.5) / (nn * nn);
}

double christoffel_prediction(const AlphaBall& ball, Vec2 x, int n, double sigma) {
  if (n < 1) throw std::invalid_argument("degree n must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const AlphaBallPoint p = nearest_boundary_point_exact(ball, x);
  const double nn = static_cast<double>(n);
  if (p.delta < sigma / (nn * nn))
    throw TooCloseToBoundary("delta is below sigma n^-2");
  return prediction_shape(ball, p.x0, p.delta, n);
}

}  // namespace christoffel
