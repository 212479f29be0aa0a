#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace christoffel {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);
Vec2 normalized(Vec2 a);
// Counterclockwise rotation by +90 degrees.
inline Vec2 rotate_ccw(Vec2 a) { return {-a.y, a.x}; }

struct Box {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

// p -> shift + A p, with A stored row-major.
struct AffineMap {
  Vec2 shift;
  std::array<double, 4> matrix{1.0, 0.0, 0.0, 1.0};

  static AffineMap identity() { return {}; }
  static AffineMap scaling(double sx, double sy) { return {{}, {sx, 0.0, 0.0, sy}}; }
  static AffineMap rotation(double radians);
  static AffineMap translation(Vec2 offset) { return {offset, {1.0, 0.0, 0.0, 1.0}}; }

  double det() const { return matrix[0] * matrix[3] - matrix[1] * matrix[2]; }
  Vec2 linear(Vec2 p) const {
    return {matrix[0] * p.x + matrix[1] * p.y, matrix[2] * p.x + matrix[3] * p.y};
  }
  Vec2 transpose_linear(Vec2 p) const {
    return {matrix[0] * p.x + matrix[2] * p.y, matrix[1] * p.x + matrix[3] * p.y};
  }
  Vec2 operator()(Vec2 p) const { return shift + linear(p); }
  // Throws SingularTransform when |det A| < 1e-14.
  AffineMap inverse() const;
};

// Composition (outer after inner).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

enum class BodyKind { disk, alpha_ball, polygon, affine };

// Immutable planar convex body: membership oracle, a bounding box that
// contains it, and the construction it came from. Copies share state.
class ConvexBody {
 public:
  // The closed unit disk.
  static ConvexBody unit_disk();
  // {|x|^alpha + |y|^alpha <= 1}; alpha >= 1.
  static ConvexBody alpha_ball(double alpha);
  // Vertices in counterclockwise order. Rejects non-convex, clockwise,
  // self-intersecting or degenerate lists with InvalidDomainSpec.
  static ConvexBody polygon(std::vector<Vec2> vertices);

  bool contains(Vec2 p) const;
  const Box& bbox() const;
  BodyKind kind() const;

  // A point of the body maximizing <p, direction>.
  Vec2 support_point(Vec2 direction) const;
  // A point strictly inside the body.
  Vec2 interior_point() const;

  // Kind-specific accessors; each throws std::logic_error on the wrong kind.
  double alpha() const;
  const std::vector<Vec2>& vertices() const;
  const ConvexBody& base() const;
  const AffineMap& map() const;

  std::string describe() const;

  struct Shape;

 private:
  explicit ConvexBody(std::shared_ptr<const Shape> shape);
  friend ConvexBody apply_affine(const ConvexBody& body, const AffineMap& map);

  std::shared_ptr<const Shape> shape_;
};

// Image T(D). Membership is evaluated through the inverse map; the bbox is
// the box of the mapped base-box corners, padded by 1e-12 relative.
ConvexBody apply_affine(const ConvexBody& body, const AffineMap& map);

// Width of the body in direction u (difference of support values).
double width_along(const ConvexBody& body, Vec2 u);

// Evaluation point x with unit direction u and unit normal v.
struct RayConfig {
  Vec2 x;
  Vec2 u;
  Vec2 v;

  // Normalizes u and sets v to its counterclockwise rotation.
  static RayConfig toward(Vec2 x, Vec2 u);
  // Checks |u| = |v| = 1 and u.v = 0 within 1e-12.
  RayConfig(Vec2 x, Vec2 u, Vec2 v);
};

struct SectionLengths {
  double l1 = 0.0;  // along -v
  double l2 = 0.0;  // along +v
};

// Sampled modified parallel-section functions l_1(t), l_2(t) over an
// ascending geometric grid spanning [delta/2, beta].
struct SectionProfile {
  RayConfig config{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  double delta = 0.0;
  double beta = 0.0;
  std::vector<double> t_grid;
  std::vector<double> l1;
  std::vector<double> l2;
  // Sections through x itself (t = delta), used by the upper bound.
  SectionLengths at_delta;
};

struct Ellipse {
  Vec2 center;
  Vec2 u{1.0, 0.0};
  Vec2 v{0.0, 1.0};
  double semi_axis_u = 0.0;
  double semi_axis_v = 0.0;

  bool contains(Vec2 p) const;
  Vec2 boundary_point(double angle) const;
  // Affine map sending the closed unit disk onto this ellipse.
  AffineMap from_unit_disk() const;
};

struct BoundaryPoint {
  Vec2 foot;
  double delta = 0.0;
};

// Absolute length tolerance of every membership bisection below.
inline constexpr double kBisectionTolerance = 1e-11;

// delta = max{q : x + q u in D}. Exponential search from step 1e-3, then
// bisection to kBisectionTolerance. Returns the last member abscissa.
double ray_extent(const ConvexBody& body, Vec2 x, Vec2 u);

// l_i = max{s : anchor + (-1)^i s v in D}.
SectionLengths section_lengths_at(const ConvexBody& body, Vec2 anchor, Vec2 v);

// Sections through the anchor x + (delta - t) u, delta = ray_extent(x, u).
SectionLengths section_lengths(const ConvexBody& body, const RayConfig& cfg, double t);
SectionLengths section_lengths(const ConvexBody& body, const RayConfig& cfg, double delta,
                               double t);

// Ascending geometric grid of `count` points spanning [lo, hi] inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

inline constexpr int kDefaultGridSize = 128;

// grid_size >= 16.
SectionProfile section_profile(const ConvexBody& body, const RayConfig& cfg, double beta,
                               int grid_size = kDefaultGridSize);

// The ellipse {x + (delta - t) u + s v : ((beta/3 + delta/2 - t)/(beta/3))^2
// + (s/Lambda)^2 <= 1} with Lambda = sqrt(beta/6) * min_{i,t} l_i(t)/sqrt(t),
// the minimum taken over the profile grid.
Ellipse inscribed_ellipse(const SectionProfile& profile);

// Samples the boundary of `e` shrunk by 1e-9 relative toward its center.
// samples >= 256.
bool contains_ellipse(const ConvexBody& body, const Ellipse& e, int samples = 1024);

// Nearest boundary point of an interior x. Exact for the disk; otherwise
// golden-section search on the ray angle from 8 starts.
BoundaryPoint nearest_boundary_point(const ConvexBody& body, Vec2 x);

}  // namespace christoffel
