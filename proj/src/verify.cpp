#include "christoffel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>

#include <boost/math/constants/constants.hpp>

#include "christoffel/alpha_ball.hpp"
#include "christoffel/bounds.hpp"
#include "christoffel/christoffel.hpp"
#include "christoffel/domain_spec.hpp"
#include "christoffel/errors.hpp"
#include "christoffel/moments.hpp"
#include "christoffel/sweep.hpp"

namespace christoffel {
namespace {

constexpr double kPi = boost::math::constants::pi<double>();

using Moments6 = std::array<double, 6>;  // 1, x, y, x^2, xy, y^2

Moments6 polygon_moments(const std::vector<Vec2>& v) {
  Moments6 m{};
  const std::size_t count = v.size();
  for (std::size_t k = 0; k < count; ++k) {
    const Vec2 a = v[k];
    const Vec2 b = v[(k + 1) % count];
    const double c = cross(a, b);
    m[0] += c / 2.0;
    m[1] += c * (a.x + b.x) / 6.0;
    m[2] += c * (a.y + b.y) / 6.0;
    m[3] += c * (a.x * a.x + a.x * b.x + b.x * b.x) / 12.0;
    m[4] += c * (2.0 * a.x * a.y + a.x * b.y + b.x * a.y + 2.0 * b.x * b.y) / 24.0;
    m[5] += c * (a.y * a.y + a.y * b.y + b.y * b.y) / 12.0;
  }
  return m;
}

Moments6 affine_moments(const Moments6& base, const AffineMap& map) {
  const double j = std::abs(map.det());
  const auto& a = map.matrix;
  const Vec2 b = map.shift;
  const Vec2 c = map.linear({base[1], base[2]});
  // A S A^T with S the base second-moment matrix.
  const double s00 = base[3], s01 = base[4], s11 = base[5];
  const double r00 = a[0] * s00 + a[1] * s01, r01 = a[0] * s01 + a[1] * s11;
  const double r10 = a[2] * s00 + a[3] * s01, r11 = a[2] * s01 + a[3] * s11;
  const double t00 = r00 * a[0] + r01 * a[1];
  const double t01 = r00 * a[2] + r01 * a[3];
  const double t11 = r10 * a[2] + r11 * a[3];
  Moments6 m{};
  m[0] = j * base[0];
  m[1] = j * (base[0] * b.x + c.x);
  m[2] = j * (base[0] * b.y + c.y);
  m[3] = j * (t00 + 2.0 * c.x * b.x + base[0] * b.x * b.x);
  m[4] = j * (t01 + c.x * b.y + b.x * c.y + base[0] * b.x * b.y);
  m[5] = j * (t11 + 2.0 * c.y * b.y + base[0] * b.y * b.y);
  return m;
}

// Chord parameters s with p + s w on the boundary, s_lo < 0 < s_hi, for a
// point p inside the body. Exact for disks and polygons; alpha balls use
// bisection on the gauge |x|^alpha + |y|^alpha - 1.
std::pair<double, double> chord_params(const ConvexBody& body, Vec2 p, Vec2 w) {
  switch (body.kind()) {
    case BodyKind::disk: {
      const double a = dot(w, w), b = dot(p, w), c = dot(p, p) - 1.0;
      const double root = std::sqrt(b * b - a * c);
      return {(-b - root) / a, (-b + root) / a};
    }
    case BodyKind::polygon: {
      double lo = -INFINITY, hi = INFINITY;
      const auto& v = body.vertices();
      for (std::size_t k = 0; k < v.size(); ++k) {
        const Vec2 a = v[k];
        const Vec2 e = v[(k + 1) % v.size()] - a;
        // Inside means cross(e, q - a) >= 0.
        const double num = cross(e, p - a);
        const double den = cross(e, w);
        if (den > 0.0) lo = std::max(lo, -num / den);
        if (den < 0.0) hi = std::min(hi, -num / den);
      }
      return {lo, hi};
    }
    case BodyKind::affine: {
      const AffineMap inv = body.map().inverse();
      return chord_params(body.base(), inv(p), inv.linear(w));
    }
    case BodyKind::alpha_ball: {
      const double alpha = body.alpha();
      const auto gauge = [&](double s) {
        const Vec2 q = p + s * w;
        return std::pow(std::abs(q.x), alpha) + std::pow(std::abs(q.y), alpha) - 1.0;
      };
      const auto solve = [&](double sign) {
        double lo = 0.0, hi = sign;
        while (gauge(hi) < 0.0) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
          const double mid = 0.5 * (lo + hi);
          if (mid == lo || mid == hi) break;
          (gauge(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
      };
      return {solve(-1.0), solve(1.0)};
    }
  }
  throw std::logic_error("unknown body kind");
}

struct Context {
  const ConvexBody& body;
  const VerifyOptions& options;
  MomentTable table;
  std::mt19937_64 rng;
  std::map<int, std::unique_ptr<ChristoffelEvaluator>> evaluators;

  const ChristoffelEvaluator& evaluator(int n) {
    auto& slot = evaluators[n];
    if (!slot) slot = std::make_unique<ChristoffelEvaluator>(gram_matrix(table, n));
    return *slot;
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  // Uniform in the bbox, rejected until inside, then pulled slightly toward
  // an interior point.
  Vec2 interior_point() {
    const Box& box = body.bbox();
    const Vec2 c = body.interior_point();
    for (;;) {
      const Vec2 p{uniform(box.xmin, box.xmax), uniform(box.ymin, box.ymax)};
      if (body.contains(p)) return c + 0.97 * (p - c);
    }
  }
};

bool has_closed_form(const ConvexBody& body) {
  return body.kind() == BodyKind::disk || body.kind() == BodyKind::alpha_ball;
}

SuiteResult moment_oracle_agreement(Context& ctx) {
  SuiteResult r;
  const Moments6 oracle = low_order_moments(ctx.body);
  const Box& box = ctx.body.bbox();
  const double reach = std::max({std::abs(box.xmin), std::abs(box.xmax), std::abs(box.ymin),
                                 std::abs(box.ymax), 1e-300});
  const int exps[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  double low_err = 0.0;
  std::string worst;
  for (int k = 0; k < 6; ++k) {
    const int i = exps[k][0], j = exps[k][1];
    const double scale = std::max(std::abs(oracle[static_cast<std::size_t>(k)]),
                                  oracle[0] * std::pow(reach, i + j));
    const double got = ctx.table(i, j).convert_to<double>();
    const double err = std::abs(got - oracle[static_cast<std::size_t>(k)]) / scale;
    if (err > low_err) {
      low_err = err;
      worst = "m(" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
  r.measured["low_order_max_rel_error"] = low_err;
  r.measured["low_order_worst"] = worst;
  r.passed = low_err <= 1e-9;

  if (has_closed_form(ctx.body)) {
    const int degree = std::min(ctx.options.max_degree, 8);
    const MomentTable quad = quadrature_moments(ctx.body, degree, 1e-12);
    double err = 0.0;
    for (int s = 0; s <= 2 * degree; ++s)
      for (int j = 0; j <= s; ++j) {
        const Real ref = ctx.table(s - j, j);
        const Real diff = abs(quad(s - j, j) - ref);
        const double e = ((s - j) % 2 == 0 && j % 2 == 0) ? (diff / abs(ref)).convert_to<double>()
                                                          : diff.convert_to<double>();
        err = std::max(err, e);
      }
    r.measured["quadrature_max_rel_error"] = err;
    r.passed = r.passed && err <= 1e-10;
  }
  if (!r.passed) r.message = "moment table disagrees with the independent oracle at " + worst;
  return r;
}

SuiteResult gram_factorization(Context& ctx) {
  SuiteResult r;
  const int n = ctx.options.max_degree;
  try {
    const double residual = ctx.evaluator(n).factor_residual().convert_to<double>();
    const double limit = std::ldexp(1.0, -static_cast<int>(precision_bits()) / 2);
    r.measured["degree"] = n;
    r.measured["relative_residual"] = residual;
    r.passed = residual <= limit;
    if (!r.passed) r.message = "Cholesky residual above 2^(-bits/2)";
  } catch (const FactorizationFailure& e) {
    r.message = e.what();
  }
  return r;
}

SuiteResult degree_monotonicity(Context& ctx) {
  SuiteResult r;
  double worst = 0.0;
  for (int k = 0; k < 12; ++k) {
    const Vec2 x = ctx.interior_point();
    double prev = evaluate(ctx.evaluator(0), x).lambda;
    for (int n = 1; n <= ctx.options.max_degree; ++n) {
      const double cur = evaluate(ctx.evaluator(n), x).lambda;
      worst = std::max(worst, cur / prev - 1.0);
      prev = cur;
    }
  }
  r.measured["max_relative_increase"] = worst;
  r.passed = worst <= 1e-12;
  if (!r.passed) r.message = "lambda_n increased with n";
  return r;
}

SuiteResult extremal_property(Context& ctx) {
  SuiteResult r;
  Real worst = std::numeric_limits<double>::max();
  std::normal_distribution<double> gauss;
  const int trials = 60;
  for (int k = 0; k < trials; ++k) {
    const Vec2 x = ctx.interior_point();
    const int n = 1 + static_cast<int>(ctx.rng() % static_cast<unsigned>(ctx.options.max_degree));
    const ChristoffelEvaluator& ev = ctx.evaluator(n);
    const std::vector<Real> m = monomial_vector(n, x);
    std::vector<Real> c(m.size());
    Real at_x = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] = gauss(ctx.rng);
      at_x += c[i] * m[i];
    }
    // m[0] = 1, so this makes g(x) = 1.
    c[0] += 1 - at_x;
    const Real ratio = integral_of_square(ev.gram(), c) / evaluate(ev, x).lambda_exact;
    if (ratio < worst) worst = ratio;
  }
  r.measured["trials"] = trials;
  r.measured["min_integral_over_lambda"] = worst.convert_to<double>();
  r.passed = worst >= 1 - Real(1e-20);
  if (!r.passed) r.message = "a constrained polynomial beat lambda_n";
  return r;
}

SuiteResult minimizer_contract(Context& ctx) {
  SuiteResult r;
  double value_err = 0.0, integral_err = 0.0;
  for (int k = 0; k < 8; ++k) {
    const Vec2 x = ctx.interior_point();
    const int n = 1 + k % ctx.options.max_degree;
    const ChristoffelEvaluator& ev = ctx.evaluator(n);
    const std::vector<Real> c = minimizer_polynomial(ev, x);
    const Real lambda = evaluate(ev, x).lambda_exact;
    value_err = std::max(value_err, abs(polynomial_value(c, n, x) - 1).convert_to<double>());
    integral_err = std::max(
        integral_err, abs(integral_of_square(ev.gram(), c) / lambda - 1).convert_to<double>());
  }
  r.measured["max_value_error"] = value_err;
  r.measured["max_integral_error"] = integral_err;
  r.passed = value_err <= 1e-20 && integral_err <= 1e-20;
  if (!r.passed) r.message = "minimizer does not interpolate 1 or attain lambda_n";
  return r;
}

SuiteResult chord_consistency(Context& ctx) {
  SuiteResult r;
  double worst = 0.0;
  for (int k = 0; k < 40; ++k) {
    const Vec2 x = ctx.interior_point();
    const double angle = ctx.uniform(0.0, 2.0 * kPi);
    const RayConfig cfg = RayConfig::toward(x, {std::cos(angle), std::sin(angle)});
    const double delta = ray_extent(ctx.body, x, cfg.u);
    const double t = ctx.uniform(0.05, 1.0) * delta;
    const Vec2 anchor = x + (delta - t) * cfg.u;
    const SectionLengths got = section_lengths_at(ctx.body, anchor, cfg.v);
    const auto [lo, hi] = chord_params(ctx.body, anchor, cfg.v);
    const double scale = hi - lo;
    worst = std::max({worst, std::abs(got.l1 + lo) / scale, std::abs(got.l2 - hi) / scale});
  }
  if (ctx.body.kind() == BodyKind::alpha_ball && ctx.body.alpha() > 1.0 &&
      ctx.body.alpha() < 2.0) {
    const AlphaBall ball(ctx.body.alpha());
    for (int k = 0; k < 20; ++k) {
      const AlphaBallPoint p = boundary_point(ball, ctx.uniform(0.0, ball.diagonal()));
      const double t = ctx.uniform(0.01, 1.0) * ball.c0;
      const SectionEndpoints e = section_endpoints(ball, p.x0, t);
      const SectionLengths got = section_lengths_at(ctx.body, p.foot - t * p.u, p.v);
      worst = std::max({worst, std::abs(got.l1 - e.l1) / (e.l1 + e.l2),
                        std::abs(got.l2 - e.l2) / (e.l1 + e.l2)});
    }
  }
  r.measured["max_relative_error"] = worst;
  r.passed = worst <= 1e-8;
  if (!r.passed) r.message = "section lengths disagree with exact chords";
  return r;
}

SuiteResult ellipse_containment(Context& ctx) {
  SuiteResult r;
  int checked = 0, failures = 0;
  std::string first_error;
  for (int k = 0; k < 40; ++k) {
    const Vec2 start = ctx.interior_point();
    const BoundaryPoint bp = nearest_boundary_point(ctx.body, start);
    const Vec2 u = normalized(bp.foot - start);
    const double beta = default_beta(ctx.body, start, u);
    const double depth = std::min(bp.delta, ctx.uniform(0.02, 0.45) * beta);
    const Vec2 x = bp.foot - depth * u;
    try {
      const SectionProfile profile = section_profile(ctx.body, RayConfig::toward(x, u), beta);
      ++checked;
      if (!contains_ellipse(ctx.body, inscribed_ellipse(profile))) ++failures;
    } catch (const Error& e) {
      ++failures;
      if (first_error.empty()) first_error = e.what();
    }
  }
  r.measured["configurations"] = checked;
  r.measured["failures"] = failures;
  r.passed = failures == 0;
  if (!r.passed)
    r.message = first_error.empty() ? "inscribed ellipse leaves the body" : first_error;
  return r;
}

SuiteResult shape_band(Context& ctx) {
  SuiteResult r;
  const int top = ctx.options.max_degree;
  SweepOptions opts;
  opts.moments = &ctx.table;
  std::vector<double> values;
  double limit = 25.0;
  if (ctx.body.kind() == BodyKind::disk) {
    opts.with_bounds = false;
    std::vector<double> radii;
    for (int k = 0; k < 12; ++k) radii.push_back(0.95 * k / 11.0);
    std::vector<int> ns;
    for (int n = std::min(5, top); n <= top; ++n) ns.push_back(n);
    for (const SweepRow& row : run_sweep(ctx.body, disk_radial_points(radii), ns, opts))
      values.push_back(*row.ratio_prediction());
    limit = 4.0;
    r.measured["ratio"] = "lambda / prediction";
  } else if (ctx.body.kind() == BodyKind::alpha_ball && ctx.body.alpha() > 1.0 &&
             ctx.body.alpha() < 2.0) {
    const AlphaBall ball(ctx.body.alpha());
    opts.with_bounds = false;
    opts.max_delta = ball.c0;
    const auto points = alpha_ball_ray_points(ball, 5, geometric_grid(0.04, ball.c0, 6));
    std::vector<int> ns;
    for (int n = std::min(6, top); n <= top; n += 2) ns.push_back(n);
    for (const SweepRow& row : run_sweep(ctx.body, points, ns, opts))
      values.push_back(*row.ratio_prediction());
    r.measured["ratio"] = "lambda / prediction";
  } else {
    std::vector<SweepPoint> points;
    for (int k = 0; k < 10; ++k) {
      const Vec2 x = ctx.interior_point();
      const BoundaryPoint bp = nearest_boundary_point(ctx.body, x);
      SweepPoint p;
      p.x = x;
      p.foot = bp.foot;
      p.delta = bp.delta;
      p.u = normalized(bp.foot - x);
      points.push_back(p);
    }
    std::vector<double> lower, upper;
    for (const SweepRow& row : run_sweep(ctx.body, points, {top}, opts)) {
      lower.push_back(*row.ratio_lower());
      upper.push_back(*row.ratio_upper());
    }
    if (!lower.empty()) {
      values.push_back(*std::min_element(lower.begin(), lower.end()));
      values.push_back(*std::max_element(upper.begin(), upper.end()));
    }
    r.measured["ratio"] = "min lambda / lower_shape, max lambda / upper_shape";
  }
  const std::optional<Band> band = band_of(values);
  if (!band) {
    r.skipped = true;
    r.passed = true;
    r.message = "no admissible points at this degree";
    return r;
  }
  r.measured["band_lo"] = band->lo;
  r.measured["band_hi"] = band->hi;
  r.measured["width"] = band->width();
  r.measured["limit"] = limit;
  r.passed = band->lo > 0.0 && band->width() <= limit;
  if (!r.passed) r.message = "ratio band wider than the limit";
  return r;
}

}  // namespace

std::array<double, 6> low_order_moments(const ConvexBody& body) {
  switch (body.kind()) {
    case BodyKind::disk:
      return {kPi, 0.0, 0.0, kPi / 4.0, 0.0, kPi / 4.0};
    case BodyKind::alpha_ball: {
      const double a = body.alpha();
      const double g1 = std::tgamma(1.0 / a);
      const double area = 4.0 / (a * a) * g1 * g1 / std::tgamma(2.0 / a + 1.0);
      const double second = 4.0 / (a * a) * std::tgamma(3.0 / a) * g1 / std::tgamma(4.0 / a + 1.0);
      return {area, 0.0, 0.0, second, 0.0, second};
    }
    case BodyKind::polygon:
      return polygon_moments(body.vertices());
    case BodyKind::affine:
      return affine_moments(low_order_moments(body.base()), body.map());
  }
  throw std::logic_error("unknown body kind");
}

std::vector<SuiteResult> run_verify(const ConvexBody& body, const VerifyOptions& options) {
  if (options.max_degree < 1 || options.max_degree > kMaxDegree)
    throw std::invalid_argument("verify degree must be in [1, 30]");
  for (const std::string& name : options.suites)
    if (std::find(kVerifySuites.begin(), kVerifySuites.end(), name) == kVerifySuites.end())
      throw std::invalid_argument("unknown suite: " + name);

  Context ctx{body, options, moments_for(body, options.max_degree), std::mt19937_64(options.seed),
              {}};
  if (options.corrupt_moments) ctx.table.at(2, 0) *= Real(1.25);

  using Suite = SuiteResult (*)(Context&);
  const std::pair<const char*, Suite> suites[] = {
      {"moment_oracle_agreement", moment_oracle_agreement},
      {"gram_factorization", gram_factorization},
      {"degree_monotonicity", degree_monotonicity},
      {"extremal_property", extremal_property},
      {"minimizer_contract", minimizer_contract},
      {"chord_consistency", chord_consistency},
      {"ellipse_containment", ellipse_containment},
      {"shape_band", shape_band}};

  std::vector<SuiteResult> results;
  for (const auto& [name, fn] : suites) {
    if (!options.suites.empty() &&
        std::find(options.suites.begin(), options.suites.end(), name) == options.suites.end())
      continue;
    SuiteResult res;
    try {
      res = fn(ctx);
    } catch (const Error& e) {
      res.passed = false;
      res.message = e.what();
    }
    res.name = name;
    results.push_back(std::move(res));
  }
  return results;
}

nlohmann::json verify_summary(const ConvexBody& body, const std::vector<SuiteResult>& results) {
  nlohmann::json out;
  out["domain"] = body_to_json(body);
  out["suites"] = nlohmann::json::array();
  nlohmann::json failed = nlohmann::json::array();
  for (const SuiteResult& r : results) {
    nlohmann::json s{{"name", r.name}, {"passed", r.passed}, {"measured", r.measured}};
    if (r.skipped) s["skipped"] = true;
    if (!r.message.empty()) s["message"] = r.message;
    out["suites"].push_back(s);
    if (!r.passed) failed.push_back(r.name);
  }
  out["passed"] = failed.empty();
  out["failed"] = failed;
  return out;
}

}  // namespace christoffel
