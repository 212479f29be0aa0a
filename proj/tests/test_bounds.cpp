#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "christoffel/alpha_ball.hpp"
#include "christoffel/bounds.hpp"
#include "christoffel/errors.hpp"

using namespace christoffel;

namespace {

ConvexBody square() { return ConvexBody::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

SectionProfile disk_profile(double r, double beta) {
  return section_profile(ConvexBody::unit_disk(), RayConfig::toward({r, 0}, {1, 0}), beta);
}

// The ellipse as an affine image of the unit disk.
ConvexBody ellipse_body(const Ellipse& e) {
  return apply_affine(ConvexBody::unit_disk(),
                      AffineMap{e.center,
                                {e.semi_axis_u * e.u.x, e.semi_axis_v * e.v.x,
                                 e.semi_axis_u * e.u.y, e.semi_axis_v * e.v.y}});
}

}  // namespace

TEST_CASE("lower bound shape") {
  // min over t of sqrt(2 - t) sits at t = beta.
  const SectionProfile disk = disk_profile(0.6, 0.9);
  CHECK(disk.delta == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(lower_bound_shape(disk, 10) ==
        doctest::Approx(0.01 * std::sqrt(0.4) * std::sqrt(1.1)).epsilon(1e-9));
  CHECK(lower_bound_shape(disk, 20) == doctest::Approx(lower_bound_shape(disk, 10) / 4));

  const SectionProfile sq = section_profile(square(), RayConfig::toward({0, 0.6}, {0, 1}), 1.0);
  CHECK(lower_bound_shape(sq, 10) == doctest::Approx(0.01 * std::sqrt(0.4)).epsilon(1e-9));

  CHECK_THROWS_AS(lower_bound_shape(disk_profile(0.5, 0.9), 10), DeltaTooLarge);
  CHECK_THROWS_AS(lower_bound_shape(disk, 0), std::invalid_argument);
}

TEST_CASE("upper bound shape") {
  // l_i(delta) = sqrt(0.75); the product 0.75 exceeds delta = 0.5.
  CHECK(upper_bound_shape(disk_profile(0.5, 0.9), 10) ==
        doctest::Approx(0.01 * std::sqrt(0.5)).epsilon(1e-9));

  // Close to the circle the chord product 2 delta - delta^2 wins over delta
  // only by a factor of 2, so the sqrt(delta) branch is active.
  const double delta = 1e-4;
  const SectionProfile near = disk_profile(1 - delta, 0.5);
  CHECK(upper_bound_shape(near, 10) == doctest::Approx(0.01 * std::sqrt(delta)).epsilon(1e-6));

  // Alpha ball pole: l_i(delta) = f^-1(1 - delta), about (alpha delta)^(1/alpha).
  // The product branch wins once delta is small enough for the alpha factor.
  for (double a : {1.2, 1.5, 1.8}) {
    const ConvexBody ball = ConvexBody::alpha_ball(a);
    for (double d : {0.01, 0.05}) {
      const SectionProfile p = section_profile(ball, RayConfig::toward({0, 1 - d}, {0, 1}), 0.1);
      const double li = f_inverse(a, 1 - d);
      CHECK(upper_bound_shape(p, 10) ==
            doctest::Approx(0.01 * std::sqrt(std::min(li * li, d))).epsilon(1e-8));
      if (d == 0.01 && a < 1.7) CHECK(li * li < d);
      const double shape = 0.01 * std::pow(d, 1 / a);
      CHECK(upper_bound_shape(p, 10) / shape > 0.5);
      CHECK(upper_bound_shape(p, 10) / shape < 2.0);
    }
  }
}

TEST_CASE("matching conditions") {
  for (double beta : {0.5, 0.9, 1.2}) {
    const SectionProfile p = disk_profile(0.6, beta);
    const ConditionReport r = check_conditions(p, 2.0, 4.0);
    CHECK(r.ratio_l1_l2_max == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.quasi_monotonicity_defect ==
          doctest::Approx(std::sqrt((2 - p.delta / 2) / (2 - beta))).epsilon(1e-9));
    CHECK(r.passes);
  }

  const SectionProfile sq = section_profile(square(), RayConfig::toward({0, 0.6}, {0, 1}), 1.0);
  ConditionReport r = check_conditions(sq, 2.0, 4.0);
  CHECK(r.ratio_l1_l2_max == doctest::Approx(1.0));
  CHECK(r.quasi_monotonicity_defect == doctest::Approx(std::sqrt(2 * 1.0 / 0.4)).epsilon(1e-9));
  CHECK(r.passes);
  r = check_conditions(sq, 2.0, 2.0);
  CHECK_FALSE(r.passes);

  // Off-centre square point: l1 = 0.7, l2 = 1.3.
  const SectionProfile off = section_profile(square(), RayConfig::toward({0.3, 0.6}, {0, 1}), 1.0);
  r = check_conditions(off, 2.0, 4.0);
  CHECK(r.ratio_l1_l2_max == doctest::Approx(1.3 / 0.7).epsilon(1e-9));
  CHECK_FALSE(check_conditions(off, 1.5, 4.0).passes);

  CHECK_THROWS_AS(check_conditions(sq, 1.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(check_conditions(sq, 2.0, 0.5), std::invalid_argument);

  // Alpha ball diagonal, delta >= x0^alpha / 4.
  for (double a : {1.2, 1.5, 1.8}) {
    const AlphaBall ball(a);
    for (double x0 : {0.2, 0.4, ball.diagonal()}) {
      const AlphaBallPoint foot = boundary_point(ball, x0);
      const double delta = std::min(std::pow(x0, a) / 4, 0.4 * ball.c0);
      const SectionProfile p =
          section_profile(ball.body(), RayConfig::toward(foot.foot - delta * foot.u, foot.u),
                          ball.c0);
      INFO("alpha " << a << " x0 " << x0);
      CHECK(check_conditions(p, 4.0, 4.0).passes);
    }
  }
}

TEST_CASE("default beta") {
  CHECK(default_beta(ConvexBody::alpha_ball(1.5), {0, 0.9}, {0, 1}) == AlphaBall(1.5).c0);
  CHECK(default_beta(ConvexBody::unit_disk(), {0.5, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(default_beta(square(), {0, 0.5}, {0, 1}) == doctest::Approx(1.0));
  // The triangle chord through x along u is shorter than the width.
  const ConvexBody tri = ConvexBody::polygon({{0, 0}, {1, 0}, {0, 1}});
  CHECK(default_beta(tri, {0.1, 0.1}, {1, 0}) == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(default_beta(tri, {0.1, 0.1}, {0.6, 0.8}) < 0.5 * width_along(tri, {0.6, 0.8}));
}

TEST_CASE("two-sided report") {
  const ConvexBody disk = ConvexBody::unit_disk();
  const ChristoffelEvaluator ev = ChristoffelEvaluator::for_body(disk, 10);

  const BoundEstimate est = two_sided_report(disk, {0.6, 0}, {1, 0}, 10, 0.9, 4.0, ev);
  CHECK_FALSE(est.deep_interior);
  CHECK(est.lower_shape == doctest::Approx(0.01 * std::sqrt(0.44)).epsilon(1e-9));
  CHECK(est.upper_shape == doctest::Approx(0.01 * std::sqrt(0.4)).epsilon(1e-9));
  REQUIRE(est.lambda_exact.has_value());
  CHECK(est.ratio_lower() > 0.0);
  CHECK(std::isfinite(est.ratio_upper()));

  const BoundEstimate deep = two_sided_report(disk, {0, 0}, {1, 0}, 10, 0.9, 4.0, ev);
  CHECK(deep.deep_interior);
  CHECK(deep.lower_shape == doctest::Approx(0.01));

  CHECK_THROWS_AS(two_sided_report(disk, {0.97, 0}, {1, 0}, 10, 0.9, 4.0, ev), TooCloseToBoundary);
  CHECK_THROWS_AS(two_sided_report(disk, {0.6, 0}, {1, 0}, 9, 0.9, 4.0, ev), std::invalid_argument);
  CHECK_THROWS_AS(two_sided_report(disk, {0.6, 0}, {1, 0}, 10, 0.9, 0.0, ev), std::invalid_argument);
}

TEST_CASE("ratio bands over a disk sweep") {
  std::vector<double> lower, upper;
  for (int n : {5, 10, 15, 20}) {
    const ChristoffelEvaluator ev = ChristoffelEvaluator::for_body(ConvexBody::unit_disk(), n);
    for (double r = 0.1; r < 1; r += 0.05) {
      if (1 - r < 4.0 / (n * n) * 1.0001) continue;
      const BoundEstimate e = two_sided_report(ConvexBody::unit_disk(), {r, 0}, {1, 0}, n,
                                               1.0, 4.0, ev);
      lower.push_back(e.ratio_lower());
      upper.push_back(e.ratio_upper());
    }
  }
  const auto [llo, lhi] = std::minmax_element(lower.begin(), lower.end());
  const auto [ulo, uhi] = std::minmax_element(upper.begin(), upper.end());
  CHECK(*llo > 0.0);
  CHECK(*lhi / *llo <= 10.0);
  CHECK(*uhi / *ulo <= 10.0);
}

TEST_CASE("shape ordering") {
  struct Case {
    ConvexBody body;
    Vec2 x;
    Vec2 u;
  };
  const Case cases[] = {{ConvexBody::unit_disk(), {0.7, 0}, {1, 0}},
                        {ConvexBody::unit_disk(), {0, -0.9}, {0, -1}},
                        {square(), {0.8, 0.1}, {1, 0}},
                        {ConvexBody::alpha_ball(1.5), {0, 0.95}, {0, 1}}};
  for (const Case& c : cases) {
    const double beta = default_beta(c.body, c.x, c.u);
    const SectionProfile p = section_profile(c.body, RayConfig::toward(c.x, c.u), beta);
    if (!(p.delta < beta / 2)) continue;
    const double lo = lower_bound_shape(p, 10);
    const double up = upper_bound_shape(p, 10);
    CHECK(lo > 0.0);
    CHECK(up > 0.0);
    CHECK(lo <= 4.0 * up);
    if (check_conditions(p, 2.0, 4.0).passes) CHECK(std::max(lo / up, up / lo) <= 8 * 16.0);
  }
}

TEST_CASE("inscribed ellipse gives a smaller Christoffel function") {
  const int n = 6;
  struct Case {
    ConvexBody body;
    Vec2 x;
    Vec2 u;
  };
  const Case cases[] = {{ConvexBody::unit_disk(), {0.6, 0}, {1, 0}},
                        {square(), {0.2, 0.7}, {0, 1}},
                        {ConvexBody::alpha_ball(1.5), {0.1, 0.93}, {0, 1}}};
  for (const Case& c : cases) {
    const double beta = default_beta(c.body, c.x, c.u);
    const SectionProfile p = section_profile(c.body, RayConfig::toward(c.x, c.u), beta);
    const Ellipse e = inscribed_ellipse(p);
    REQUIRE(contains_ellipse(c.body, e));
    const ConvexBody inner = ellipse_body(e);
    REQUIRE(inner.contains(c.x));
    const double le = evaluate(ChristoffelEvaluator::for_body(inner, n), c.x).lambda;
    const double ld = evaluate(ChristoffelEvaluator::for_body(c.body, n), c.x).lambda;
    CHECK(le <= ld * (1 + 1e-9));
  }
}
