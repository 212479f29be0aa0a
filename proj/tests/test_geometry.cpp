#include <doctest.h>

#include <cmath>
#include <random>

#include "christoffel/errors.hpp"
#include "christoffel/geometry.hpp"

using namespace christoffel;

namespace {

const double kPi = std::acos(-1.0);

ConvexBody square() { return ConvexBody::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

// Root of |d cos a|^p + |d sin a|^p = 1 by plain bisection on d.
double alpha_radius(double p, double angle) {
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = std::pow(std::abs(mid * std::cos(angle)), p) +
                     std::pow(std::abs(mid * std::sin(angle)), p) - 1.0;
    (g < 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("ray extent on the disk and B_1.5") {
  const ConvexBody disk = ConvexBody::unit_disk();
  CHECK(ray_extent(disk, {0, 0}, {1, 0}) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ray_extent(disk, {0.5, 0}, {1, 0}) == doctest::Approx(0.5).epsilon(1e-10));

  const double a = kPi / 6.0;
  const ConvexBody ball = ConvexBody::alpha_ball(1.5);
  CHECK(std::abs(ray_extent(ball, {0, 0}, {std::cos(a), std::sin(a)}) - alpha_radius(1.5, a)) <
        1e-10);

  CHECK_THROWS_AS(ray_extent(disk, {2, 0}, {1, 0}), PointOutsideDomain);
}

TEST_CASE("section lengths") {
  const ConvexBody disk = ConvexBody::unit_disk();
  const RayConfig cfg({0, 0}, {1, 0}, {0, 1});
  SectionLengths s = section_lengths(disk, cfg, 0.5);
  CHECK(s.l1 == doctest::Approx(std::sqrt(0.75)).epsilon(1e-10));
  CHECK(s.l2 == doctest::Approx(std::sqrt(0.75)).epsilon(1e-10));
  s = section_lengths(disk, cfg, 1.0);
  CHECK(s.l1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.l2 == doctest::Approx(1.0).epsilon(1e-10));

  // Pole of B_1.5: l_i(t) = f^-1(1 - t).
  const ConvexBody ball = ConvexBody::alpha_ball(1.5);
  const RayConfig pole({0, 1}, {0, 1}, {1, 0});
  const double want = std::pow(1.0 - std::pow(0.8, 1.5), 1.0 / 1.5);
  s = section_lengths(ball, pole, 0.0, 0.2);
  CHECK(std::abs(s.l1 - want) < 1e-10);
  CHECK(std::abs(s.l2 - want) < 1e-10);

  CHECK_THROWS_AS(section_lengths_at(disk, {1.5, 0}, {0, 1}), AnchorOutsideDomain);
}

TEST_CASE("ray config validation") {
  CHECK_THROWS(RayConfig({0, 0}, {1, 0}, {1, 0}));
  CHECK_THROWS(RayConfig({0, 0}, {2, 0}, {0, 1}));
  const RayConfig c = RayConfig::toward({0, 0}, {3, 4});
  CHECK(c.u.x == doctest::Approx(0.6));
  CHECK(c.v.x == doctest::Approx(-0.8));
  CHECK(c.v.y == doctest::Approx(0.6));
}

TEST_CASE("section profile of the disk") {
  const ConvexBody disk = ConvexBody::unit_disk();
  const SectionProfile p = section_profile(disk, RayConfig::toward({0.5, 0}, {1, 0}), 0.9, 64);
  CHECK(p.delta == doctest::Approx(0.5).epsilon(1e-10));
  REQUIRE(p.t_grid.size() == 64);
  CHECK(p.t_grid.front() == doctest::Approx(0.25));
  CHECK(p.t_grid.back() == doctest::Approx(0.9));
  for (std::size_t k = 0; k < p.t_grid.size(); ++k) {
    const double t = p.t_grid[k];
    const double want = std::sqrt(2 * t - t * t);
    CHECK(std::abs(p.l1[k] - want) < 1e-9);
    CHECK(std::abs(p.l2[k] - want) < 1e-9);
    if (k > 0) CHECK(p.t_grid[k] > p.t_grid[k - 1]);
  }
  CHECK_THROWS(section_profile(disk, RayConfig::toward({0.5, 0}, {1, 0}), 0.9, 8));
}

TEST_CASE("section profile of the square") {
  const SectionProfile p = section_profile(square(), RayConfig::toward({0, 0.5}, {0, 1}), 1.0, 32);
  CHECK(p.delta == doctest::Approx(0.5).epsilon(1e-10));
  for (std::size_t k = 0; k < p.t_grid.size(); ++k) {
    CHECK(std::abs(p.l1[k] - 1.0) < 1e-9);
    CHECK(std::abs(p.l2[k] - 1.0) < 1e-9);
  }
}

TEST_CASE("inscribed ellipse") {
  const ConvexBody disk = ConvexBody::unit_disk();
  // delta = 0.4 < beta/2; the minimiser of sqrt(2 - t) is still t = beta.
  SectionProfile p = section_profile(disk, RayConfig::toward({0.6, 0}, {1, 0}), 0.9);
  Ellipse e = inscribed_ellipse(p);
  CHECK(e.semi_axis_u == doctest::Approx(0.3));
  CHECK(e.semi_axis_v == doctest::Approx(std::sqrt(0.15) * std::sqrt(1.1)).epsilon(1e-9));
  CHECK(e.semi_axis_v == doctest::Approx(0.4062).epsilon(1e-4));
  // Center x + (delta/2 - beta/3) u.
  CHECK(e.center.x == doctest::Approx(0.6 + 0.2 - 0.3));
  CHECK(contains_ellipse(disk, e));

  // Doubling Lambda still fits (max |p|^2 on the boundary is about 0.95);
  // tripling does not.
  Ellipse wide = e;
  wide.semi_axis_v *= 2.0;
  CHECK(contains_ellipse(disk, wide));
  wide.semi_axis_v = 3.0 * e.semi_axis_v;
  CHECK_FALSE(contains_ellipse(disk, wide));

  Ellipse off;
  off.center = {0.95, 0};
  off.semi_axis_u = off.semi_axis_v = 0.1;
  CHECK_FALSE(contains_ellipse(disk, off));

  p = section_profile(square(), RayConfig::toward({0, 0.6}, {0, 1}), 1.0);
  e = inscribed_ellipse(p);
  CHECK(e.semi_axis_v == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-9));
  CHECK(contains_ellipse(square(), e));

  // delta >= beta/2 is rejected.
  p = section_profile(disk, RayConfig::toward({0.5, 0}, {1, 0}), 0.9);
  CHECK_THROWS_AS(inscribed_ellipse(p), DeltaTooLarge);
  CHECK_THROWS(contains_ellipse(disk, e, 100));
}

TEST_CASE("nearest boundary point") {
  BoundaryPoint b = nearest_boundary_point(ConvexBody::unit_disk(), {0.3, 0.4});
  CHECK(b.foot.x == doctest::Approx(0.6));
  CHECK(b.foot.y == doctest::Approx(0.8));
  CHECK(b.delta == doctest::Approx(0.5));

  b = nearest_boundary_point(square(), {0.9, 0});
  CHECK(b.foot.x == doctest::Approx(1.0).epsilon(1e-8));
  // The distance is flat in the foot position, so the foot is only good to
  // about sqrt(eps).
  CHECK(std::abs(b.foot.y) < 1e-5);
  CHECK(b.delta == doctest::Approx(0.1).epsilon(1e-9));

  const double d = std::pow(2.0, -1.0 / 1.5);
  b = nearest_boundary_point(ConvexBody::alpha_ball(1.5), {0.9 * d, 0.9 * d});
  CHECK(b.foot.x == doctest::Approx(d).epsilon(1e-5));
  CHECK(b.foot.y == doctest::Approx(d).epsilon(1e-5));
  CHECK(b.delta == doctest::Approx(0.1 * std::sqrt(2.0) * d).epsilon(1e-9));

  CHECK_THROWS_AS(nearest_boundary_point(square(), {2, 0}), PointOutsideDomain);
}

TEST_CASE("affine images") {
  const ConvexBody disk = ConvexBody::unit_disk();
  const ConvexBody ell = apply_affine(disk, AffineMap::scaling(2, 1));
  CHECK(ell.contains({1.5, 0}));
  CHECK_FALSE(ell.contains({0, 1.5}));

  const ConvexBody same = apply_affine(square(), AffineMap::identity());
  const ConvexBody rot = apply_affine(disk, AffineMap::rotation(37.0 * kPi / 180.0));
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 25; ++j) {
      const Vec2 p{-1.2 + 2.4 * i / 24.0 + 1e-3, -1.2 + 2.4 * j / 24.0 + 1e-3};
      CHECK(same.contains(p) == square().contains(p));
      CHECK(rot.contains(p) == disk.contains(p));
    }

  CHECK_THROWS_AS(apply_affine(disk, AffineMap::scaling(1e-8, 1e-8)), SingularTransform);
}

TEST_CASE("polygon validation") {
  CHECK_THROWS(ConvexBody::polygon({{1, 1}, {1, -1}, {-1, -1}, {-1, 1}}));  // clockwise
  CHECK_THROWS(ConvexBody::polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}));
  CHECK_THROWS(ConvexBody::polygon({{0, 0}, {1, 0}, {2, 0}}));
  CHECK_NOTHROW(ConvexBody::polygon({{0, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("body invariants: convexity, bbox, interior point") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ConvexBody bodies[] = {
      ConvexBody::unit_disk(), ConvexBody::alpha_ball(1.2), ConvexBody::alpha_ball(1.8),
      square(), apply_affine(ConvexBody::alpha_ball(1.5), {{0.2, -0.1}, {1.0, 0.4, -0.3, 0.8}})};
  for (const ConvexBody& b : bodies) {
    const Box& box = b.bbox();
    CHECK(box.width() > 0);
    CHECK(box.height() > 0);
    CHECK(b.contains(b.interior_point()));
    std::vector<Vec2> members;
    for (int k = 0; k < 2000; ++k) {
      const Vec2 p{box.xmin - 0.1 + (box.width() + 0.2) * unit(rng),
                   box.ymin - 0.1 + (box.height() + 0.2) * unit(rng)};
      if (b.contains(p)) {
        CHECK(box.contains(p));
        members.push_back(p);
      }
    }
    for (std::size_t k = 1; k < members.size(); k += 7) {
      const Vec2 p = members[k - 1], q = members[k];
      for (int s = 1; s < 10; ++s) CHECK(b.contains(p + (s / 10.0) * (q - p)));
    }
  }
}

TEST_CASE("chord consistency and symmetry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ConvexBody bodies[] = {ConvexBody::unit_disk(), ConvexBody::alpha_ball(1.5), square()};
  for (const ConvexBody& b : bodies) {
    for (int k = 0; k < 30; ++k) {
      const Vec2 x{-0.5 + unit(rng), -0.5 + unit(rng)};
      const double a = 2 * kPi * unit(rng);
      const RayConfig cfg = RayConfig::toward(x, {std::cos(a), std::sin(a)});
      const double delta = ray_extent(b, x, cfg.u);
      const double t = delta * (0.05 + 0.9 * unit(rng));
      const Vec2 anchor = x + (delta - t) * cfg.u;
      const SectionLengths s = section_lengths(b, cfg, t);
      const double chord = ray_extent(b, anchor, cfg.v) + ray_extent(b, anchor, -cfg.v);
      CHECK(std::abs(s.l1 + s.l2 - chord) < 1e-9);
    }
  }
  // Symmetric configurations: l1 = l2.
  const SectionProfile p =
      section_profile(ConvexBody::alpha_ball(1.5), RayConfig::toward({0, 0.7}, {0, 1}), 0.1);
  for (std::size_t k = 0; k < p.t_grid.size(); ++k) CHECK(std::abs(p.l1[k] - p.l2[k]) < 1e-9);
}

TEST_CASE("sections grow with depth near the boundary") {
  for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
    const ConvexBody b = ConvexBody::alpha_ball(alpha);
    for (double x0 : {0.0, 0.3, 0.5}) {
      const double y0 = std::pow(1.0 - std::pow(x0, alpha), 1.0 / alpha);
      const double slope = x0 == 0.0 ? 0.0 : -std::pow(x0, alpha - 1) * std::pow(y0, 1 - alpha);
      const Vec2 u = normalized({-slope, 1.0});
      const Vec2 x = Vec2{x0, y0} - 0.01 * u;
      const SectionProfile p = section_profile(b, RayConfig::toward(x, u), 0.1, 64);
      for (std::size_t k = 1; k < p.t_grid.size(); ++k) {
        CHECK(p.l1[k] >= p.l1[k - 1] - 1e-10);
        CHECK(p.l2[k] >= p.l2[k - 1] - 1e-10);
      }
    }
  }
}

TEST_CASE("ray extent scales with the body") {
  const ConvexBody disk = ConvexBody::unit_disk();
  const ConvexBody big = apply_affine(disk, AffineMap::scaling(2.5, 2.5));
  for (Vec2 x : {Vec2{0.1, 0.2}, Vec2{-0.4, 0.3}})
    for (Vec2 u : {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, 0}, Vec2{0, -1}})
      CHECK(std::abs(ray_extent(big, 2.5 * x, u) - 2.5 * ray_extent(disk, x, u)) < 1e-9);
}

TEST_CASE("geometric grid") {
  const auto g = geometric_grid(1e-3, 1.0, 4);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(1e-3));
  CHECK(g[1] == doctest::Approx(1e-2));
  CHECK(g[3] == doctest::Approx(1.0));
}
