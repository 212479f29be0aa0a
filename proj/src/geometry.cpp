#include "christoffel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "christoffel/errors.hpp"

namespace christoffel {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
  return {a.x / n, a.y / n};
}

AffineMap AffineMap::rotation(double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {{}, {c, -s, s, c}};
}

AffineMap AffineMap::inverse() const {
  const double d = det();
  if (!(std::abs(d) >= 1e-14)) throw SingularTransform("affine map has |det A| below 1e-14");
  AffineMap inv;
  inv.matrix = {matrix[3] / d, -matrix[1] / d, -matrix[2] / d, matrix[0] / d};
  inv.shift = -inv.linear(shift);
  return inv;
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  const auto& a = outer.matrix;
  const auto& b = inner.matrix;
  AffineMap out;
  out.matrix = {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
  out.shift = outer(inner.shift);
  return out;
}

namespace {

// |x|^a as exp(a ln|x|), with 0 mapped to 0.
double pow_abs(double x, double a) {
  const double ax = std::abs(x);
  return ax == 0.0 ? 0.0 : std::exp(a * std::log(ax));
}

struct DiskShape {};

struct AlphaShape {
  double alpha;
};

struct PolygonShape {
  std::vector<Vec2> vertices;
  Vec2 centroid;
};

struct AffineShape {
  ConvexBody base;
  AffineMap map;
  AffineMap inverse;
};

}  // namespace

struct ConvexBody::Shape {
  std::variant<DiskShape, AlphaShape, PolygonShape, AffineShape> data;
  Box bbox;
};

ConvexBody::ConvexBody(std::shared_ptr<const Shape> shape) : shape_(std::move(shape)) {}

ConvexBody ConvexBody::unit_disk() {
  return ConvexBody(std::make_shared<Shape>(Shape{DiskShape{}, {-1.0, 1.0, -1.0, 1.0}}));
}

ConvexBody ConvexBody::alpha_ball(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha))
    throw InvalidDomainSpec("alpha_ball requires a finite alpha >= 1");
  return ConvexBody(std::make_shared<Shape>(Shape{AlphaShape{alpha}, {-1.0, 1.0, -1.0, 1.0}}));
}

ConvexBody ConvexBody::polygon(std::vector<Vec2> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw InvalidDomainSpec("polygon needs at least 3 vertices");
  double area2 = 0.0;
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 b = vertices[(i + 1) % n];
    const Vec2 c = vertices[(i + 2) % n];
    if (!std::isfinite(a.x) || !std::isfinite(a.y))
      throw InvalidDomainSpec("polygon vertex is not finite");
    const Vec2 e1 = b - a;
    const Vec2 e2 = c - b;
    if (norm(e1) == 0.0) throw InvalidDomainSpec("polygon has repeated vertices");
    if (cross(e1, e2) < 0.0)
      throw InvalidDomainSpec("polygon vertices must be convex and counterclockwise");
    turning += std::atan2(cross(e1, e2), dot(e1, e2));
    area2 += cross(a, b);
  }
  if (!(area2 > 0.0)) throw InvalidDomainSpec("polygon has no interior");
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
    throw InvalidDomainSpec("polygon winds more than once");

  Box box{vertices[0].x, vertices[0].x, vertices[0].y, vertices[0].y};
  Vec2 centroid;
  for (const Vec2& p : vertices) {
    box.xmin = std::min(box.xmin, p.x);
    box.xmax = std::max(box.xmax, p.x);
    box.ymin = std::min(box.ymin, p.y);
    box.ymax = std::max(box.ymax, p.y);
    centroid = centroid + p;
  }
  centroid = (1.0 / static_cast<double>(n)) * centroid;
  return ConvexBody(
      std::make_shared<Shape>(Shape{PolygonShape{std::move(vertices), centroid}, box}));
}

ConvexBody apply_affine(const ConvexBody& body, const AffineMap& map) {
  if (!(std::abs(map.det()) >= 1e-14))
    throw SingularTransform("affine map has |det A| below 1e-14");
  const Box& b = body.bbox();
  const Vec2 corners[4] = {{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmin, b.ymax}, {b.xmax, b.ymax}};
  Box box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& c : corners) {
    const Vec2 p = map(c);
    box.xmin = std::min(box.xmin, p.x);
    box.xmax = std::max(box.xmax, p.x);
    box.ymin = std::min(box.ymin, p.y);
    box.ymax = std::max(box.ymax, p.y);
  }
  const double pad = 1e-12 * std::max({box.width(), box.height(), std::abs(box.xmin),
                                       std::abs(box.xmax), std::abs(box.ymin),
                                       std::abs(box.ymax)});
  box.xmin -= pad;
  box.xmax += pad;
  box.ymin -= pad;
  box.ymax += pad;
  return ConvexBody(std::make_shared<ConvexBody::Shape>(
      ConvexBody::Shape{AffineShape{body, map, map.inverse()}, box}));
}

bool ConvexBody::contains(Vec2 p) const {
  return std::visit(
      [p](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DiskShape>) {
          return p.x * p.x + p.y * p.y <= 1.0;
        } else if constexpr (std::is_same_v<S, AlphaShape>) {
          return pow_abs(p.x, s.alpha) + pow_abs(p.y, s.alpha) <= 1.0;
        } else if constexpr (std::is_same_v<S, PolygonShape>) {
          const auto& v = s.vertices;
          for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 a = v[i];
            const Vec2 b = v[(i + 1) % v.size()];
            if (cross(b - a, p - a) < 0.0) return false;
          }
          return true;
        } else {
          return s.base.contains(s.inverse(p));
        }
      },
      shape_->data);
}

const Box& ConvexBody::bbox() const { return shape_->bbox; }

BodyKind ConvexBody::kind() const {
  switch (shape_->data.index()) {
    case 0: return BodyKind::disk;
    case 1: return BodyKind::alpha_ball;
    case 2: return BodyKind::polygon;
    default: return BodyKind::affine;
  }
}

Vec2 ConvexBody::support_point(Vec2 direction) const {
  return std::visit(
      [direction](const auto& s) -> Vec2 {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, DiskShape>) {
          return normalized(direction);
        } else if constexpr (std::is_same_v<S, AlphaShape>) {
          // Hoelder equality case with the conjugate exponent q.
          if (s.alpha == 1.0) {
            return std::abs(direction.x) >= std::abs(direction.y)
                       ? Vec2{std::copysign(1.0, direction.x), 0.0}
                       : Vec2{0.0, std::copysign(1.0, direction.y)};
          }
          const double q = s.alpha / (s.alpha - 1.0);
          const double nq =
              std::pow(pow_abs(direction.x, q) + pow_abs(direction.y, q), 1.0 / q);
          if (!(nq > 0.0)) throw std::invalid_argument("support direction is zero");
          const double px = pow_abs(direction.x / nq, q - 1.0);
          const double py = pow_abs(direction.y / nq, q - 1.0);
          return {std::copysign(px, direction.x), std::copysign(py, direction.y)};
        } else if constexpr (std::is_same_v<S, PolygonShape>) {
          Vec2 best = s.vertices.front();
          for (const Vec2& p : s.vertices)
            if (dot(p, direction) > dot(best, direction)) best = p;
          return best;
        } else {
          return s.map(s.base.support_point(s.map.transpose_linear(direction)));
        }
      },
      shape_->data);
}

Vec2 ConvexBody::interior_point() const {
  return std::visit(
      [](const auto& s) -> Vec2 {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PolygonShape>) {
          return s.centroid;
        } else if constexpr (std::is_same_v<S, AffineShape>) {
          return s.map(s.base.interior_point());
        } else {
          return {0.0, 0.0};
        }
      },
      shape_->data);
}

double ConvexBody::alpha() const {
  if (const auto* s = std::get_if<AlphaShape>(&shape_->data)) return s->alpha;
  throw std::logic_error("body is not an alpha ball");
}

const std::vector<Vec2>& ConvexBody::vertices() const {
  if (const auto* s = std::get_if<PolygonShape>(&shape_->data)) return s->vertices;
  throw std::logic_error("body is not a polygon");
}

const ConvexBody& ConvexBody::base() const {
  if (const auto* s = std::get_if<AffineShape>(&shape_->data)) return s->base;
  throw std::logic_error("body is not an affine image");
}

const AffineMap& ConvexBody::map() const {
  if (const auto* s = std::get_if<AffineShape>(&shape_->data)) return s->map;
  throw std::logic_error("body is not an affine image");
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind()) {
    case BodyKind::disk: os << "disk"; break;
    case BodyKind::alpha_ball: os << "alpha_ball(" << alpha() << ")"; break;
    case BodyKind::polygon: os << "polygon(" << vertices().size() << " vertices)"; break;
    case BodyKind::affine: os << "affine(" << base().describe() << ")"; break;
  }
  return os.str();
}

double width_along(const ConvexBody& body, Vec2 u) {
  return dot(body.support_point(u), u) - dot(body.support_point(-u), u);
}

RayConfig RayConfig::toward(Vec2 x, Vec2 u) {
  const Vec2 un = normalized(u);
  return RayConfig(x, un, rotate_ccw(un));
}

RayConfig::RayConfig(Vec2 x_, Vec2 u_, Vec2 v_) : x(x_), u(u_), v(v_) {
  if (std::abs(norm(u) - 1.0) > 1e-12 || std::abs(norm(v) - 1.0) > 1e-12 ||
      std::abs(dot(u, v)) > 1e-12)
    throw std::invalid_argument("ray configuration needs orthonormal u and v");
}

bool Ellipse::contains(Vec2 p) const {
  const Vec2 d = p - center;
  const double a = dot(d, u) / semi_axis_u;
  const double b = dot(d, v) / semi_axis_v;
  return a * a + b * b <= 1.0;
}

Vec2 Ellipse::boundary_point(double angle) const {
  return center + (semi_axis_u * std::cos(angle)) * u + (semi_axis_v * std::sin(angle)) * v;
}

AffineMap Ellipse::from_unit_disk() const {
  AffineMap m;
  m.matrix = {semi_axis_u * u.x, semi_axis_v * v.x, semi_axis_u * u.y, semi_axis_v * v.y};
  m.shift = center;
  return m;
}

double ray_extent(const ConvexBody& body, Vec2 x, Vec2 u) {
  if (!body.contains(x)) throw PointOutsideDomain("evaluation point is outside the domain");
  const Vec2 dir = normalized(u);
  const Box& box = body.bbox();
  const double reach = std::max({std::abs(box.xmin - x.x), std::abs(box.xmax - x.x),
                                 std::abs(box.ymin - x.y), std::abs(box.ymax - x.y)});
  double lo = 0.0;
  double hi = 1e-3;
  while (true) {
    const Vec2 p = x + hi * dir;
    if (!body.contains(p)) break;
    if (!box.contains(p) || hi > 4.0 * reach + 1.0)
      throw NoExteriorFound("ray never leaves the bounding box");
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (body.contains(x + mid * dir))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

SectionLengths section_lengths_at(const ConvexBody& body, Vec2 anchor, Vec2 v) {
  if (!body.contains(anchor)) throw AnchorOutsideDomain("section anchor is outside the domain");
  return {ray_extent(body, anchor, -v), ray_extent(body, anchor, v)};
}

SectionLengths section_lengths(const ConvexBody& body, const RayConfig& cfg, double delta,
                               double t) {
  if (!(t > 0.0)) throw std::invalid_argument("section offset t must be positive");
  return section_lengths_at(body, cfg.x + (delta - t) * cfg.u, cfg.v);
}

SectionLengths section_lengths(const ConvexBody& body, const RayConfig& cfg, double t) {
  return section_lengths(body, cfg, ray_extent(body, cfg.x, cfg.u), t);
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("geometric grid needs positive ends");
  if (lo > hi) std::swap(lo, hi);
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double ratio = std::log(hi / lo);
  for (int k = 0; k < count; ++k)
    grid[static_cast<std::size_t>(k)] = lo * std::exp(ratio * k / (count - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

SectionProfile section_profile(const ConvexBody& body, const RayConfig& cfg, double beta,
                               int grid_size) {
  if (grid_size < 16) throw std::invalid_argument("section profile grid_size must be >= 16");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  SectionProfile profile;
  profile.config = cfg;
  profile.beta = beta;
  profile.delta = ray_extent(body, cfg.x, cfg.u);
  if (!(profile.delta > 0.0))
    throw PointOutsideDomain("evaluation point lies on the boundary along u");
  profile.t_grid = geometric_grid(profile.delta / 2.0, beta, grid_size);
  profile.l1.reserve(profile.t_grid.size());
  profile.l2.reserve(profile.t_grid.size());
  for (double t : profile.t_grid) {
    const SectionLengths s = section_lengths(body, cfg, profile.delta, t);
    profile.l1.push_back(s.l1);
    profile.l2.push_back(s.l2);
  }
  profile.at_delta = section_lengths_at(body, cfg.x, cfg.v);
  return profile;
}

Ellipse inscribed_ellipse(const SectionProfile& profile) {
  const double delta = profile.delta;
  const double beta = profile.beta;
  if (!(delta < beta / 2.0)) throw DeltaTooLarge("inscribed ellipse needs delta < beta/2");
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < profile.t_grid.size(); ++k) {
    const double t = profile.t_grid[k];
    if (t < delta / 2.0 || t > beta) continue;
    if (!(profile.l1[k] > 0.0) || !(profile.l2[k] > 0.0))
      throw DegenerateProfile("section length vanishes inside [delta/2, beta]");
    min_ratio = std::min({min_ratio, profile.l1[k] / std::sqrt(t), profile.l2[k] / std::sqrt(t)});
  }
  if (!std::isfinite(min_ratio)) throw DegenerateProfile("profile grid misses [delta/2, beta]");

  const RayConfig& cfg = profile.config;
  Ellipse e;
  e.u = cfg.u;
  e.v = cfg.v;
  e.semi_axis_u = beta / 3.0;
  e.semi_axis_v = std::sqrt(beta / 6.0) * min_ratio;
  // t measured from the foot x + delta u; the center sits at t = beta/3 + delta/2.
  e.center = cfg.x + (delta / 2.0 - beta / 3.0) * cfg.u;
  return e;
}

bool contains_ellipse(const ConvexBody& body, const Ellipse& e, int samples) {
  if (samples < 256) throw std::invalid_argument("contains_ellipse needs at least 256 samples");
  Ellipse shrunk = e;
  shrunk.semi_axis_u *= 1.0 - 1e-9;
  shrunk.semi_axis_v *= 1.0 - 1e-9;
  for (int k = 0; k < samples; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / samples;
    if (!body.contains(shrunk.boundary_point(angle))) return false;
  }
  return true;
}

namespace {

double extent_at_angle(const ConvexBody& body, Vec2 x, double angle) {
  return ray_extent(body, x, {std::cos(angle), std::sin(angle)});
}

}  // namespace

BoundaryPoint nearest_boundary_point(const ConvexBody& body, Vec2 x) {
  if (!body.contains(x)) throw PointOutsideDomain("point is outside the domain");
  if (body.kind() == BodyKind::disk) {
    const double r = norm(x);
    if (r == 0.0) return {{1.0, 0.0}, 1.0};
    return {(1.0 / r) * x, 1.0 - r};
  }

  constexpr int kStarts = 8;
  constexpr double kAngleTolerance = 1e-10;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const double arc = 2.0 * std::numbers::pi / kStarts;

  double best_angle = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kStarts; ++k) {
    double a = (k - 0.5) * arc;
    double b = (k + 0.5) * arc;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = extent_at_angle(body, x, c);
    double fd = extent_at_angle(body, x, d);
    while (b - a > kAngleTolerance) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = extent_at_angle(body, x, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = extent_at_angle(body, x, d);
      }
    }
    const double angle = fc <= fd ? c : d;
    const double value = std::min(fc, fd);
    if (value < best) {
      best = value;
      best_angle = angle;
    }
  }
  const Vec2 dir{std::cos(best_angle), std::sin(best_angle)};
  return {x + best * dir, best};
}

}  // namespace christoffel
