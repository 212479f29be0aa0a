#include "christoffel/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "christoffel/precision.hpp"

namespace christoffel {
namespace {

std::optional<double> ratio(double num, const std::optional<double>& den) {
  if (!den || !(*den > 0.0)) return std::nullopt;
  return num / *den;
}

}  // namespace

std::optional<double> SweepRow::ratio_lower() const { return ratio(lambda, lower_shape); }
std::optional<double> SweepRow::ratio_upper() const { return ratio(lambda, upper_shape); }
std::optional<double> SweepRow::ratio_prediction() const { return ratio(lambda, prediction); }

std::vector<SweepPoint> disk_radial_points(const std::vector<double>& radii) {
  std::vector<SweepPoint> points;
  for (double r : radii) {
    SweepPoint p;
    p.x = {r, 0.0};
    p.u = {1.0, 0.0};
    p.foot = {1.0, 0.0};
    p.delta = 1.0 - r;
    points.push_back(p);
  }
  return points;
}

std::vector<SweepPoint> alpha_ball_ray_points(const AlphaBall& ball, int rays,
                                              const std::vector<double>& depths) {
  if (rays < 2) throw std::invalid_argument("need at least 2 rays");
  std::vector<SweepPoint> points;
  for (int k = 0; k < rays; ++k) {
    const AlphaBallPoint start = boundary_point(ball, ball.diagonal() * k / (rays - 1));
    for (double depth : depths) {
      const Vec2 x = start.foot - depth * start.u;
      const AlphaBallPoint nearest = nearest_boundary_point_exact(ball, x);
      SweepPoint p;
      p.x = x;
      p.u = nearest.normal;
      p.foot = nearest.foot;
      p.delta = nearest.delta;
      p.x0 = nearest.x0;
      p.ray = k;
      points.push_back(p);
    }
  }
  return points;
}

std::vector<SweepRow> run_sweep(const ConvexBody& body, const std::vector<SweepPoint>& points,
                                const std::vector<int>& degrees, const SweepOptions& options) {
  std::optional<AlphaBall> ball;
  if (body.kind() == BodyKind::alpha_ball && body.alpha() > 1.0 && body.alpha() < 2.0)
    ball.emplace(body.alpha());

  std::vector<int> ns(degrees);
  std::sort(ns.begin(), ns.end());
  std::vector<SweepRow> rows;
  for (int n : ns) {
    const double floor = options.sigma / (static_cast<double>(n) * n);
    std::vector<const SweepPoint*> active;
    for (const SweepPoint& p : points)
      if (p.delta >= floor && (options.max_delta <= 0.0 || p.delta <= options.max_delta))
        active.push_back(&p);
    if (active.empty()) continue;

    const ChristoffelEvaluator ev = options.moments
                                        ? ChristoffelEvaluator(gram_matrix(*options.moments, n))
                                        : ChristoffelEvaluator::for_body(body, n);
    for (const SweepPoint* p : active) {
      SweepRow row;
      row.point = *p;
      row.n = n;
      if (ball) row.alpha = ball->alpha;
      if (options.with_bounds) {
        const double beta = options.beta > 0.0 ? options.beta : default_beta(body, p->x, p->u);
        // The report requires delta strictly above sigma n^-2.
        const double sigma = std::min(options.sigma, 0.999999 * p->delta * n * n);
        const BoundEstimate est =
            two_sided_report(body, p->x, p->u, n, beta, sigma, ev, options.grid_size);
        row.lambda = *est.lambda_exact;
        row.lower_shape = est.lower_shape;
        row.upper_shape = est.upper_shape;
        row.deep_interior = est.deep_interior;
      } else {
        row.lambda = evaluate(ev, p->x).lambda;
      }
      if (ball && p->x0) {
        row.prediction = prediction_shape(*ball, *p->x0, p->delta, n);
      } else if (body.kind() == BodyKind::disk) {
        const double nn = static_cast<double>(n);
        row.prediction = std::sqrt(1.0 - dot(p->x, p->x)) / (nn * nn);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int digits) {
  const auto cell = [&](const std::optional<double>& v) {
    return v ? to_decimal(*v, digits) : std::string();
  };
  out << "alpha,x,y,x0,y0,delta,n,lambda,lower_shape,upper_shape,prediction,"
         "ratio_lower,ratio_upper,ratio_prediction\n";
  for (const SweepRow& r : rows) {
    out << cell(r.alpha) << ',' << to_decimal(r.point.x.x, digits) << ','
        << to_decimal(r.point.x.y, digits) << ',' << to_decimal(r.point.foot.x, digits) << ','
        << to_decimal(r.point.foot.y, digits) << ',' << to_decimal(r.point.delta, digits) << ','
        << r.n << ',' << to_decimal(r.lambda, digits) << ',' << cell(r.lower_shape) << ','
        << cell(r.upper_shape) << ',' << cell(r.prediction) << ',' << cell(r.ratio_lower())
        << ',' << cell(r.ratio_upper()) << ',' << cell(r.ratio_prediction()) << '\n';
  }
}

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  const auto value = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json out = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    out.push_back({{"alpha", value(r.alpha)},
                   {"x", r.point.x.x},
                   {"y", r.point.x.y},
                   {"x0", r.point.foot.x},
                   {"y0", r.point.foot.y},
                   {"delta", r.point.delta},
                   {"n", r.n},
                   {"lambda", r.lambda},
                   {"lower_shape", value(r.lower_shape)},
                   {"upper_shape", value(r.upper_shape)},
                   {"prediction", value(r.prediction)},
                   {"ratio_lower", value(r.ratio_lower())},
                   {"ratio_upper", value(r.ratio_upper())},
                   {"ratio_prediction", value(r.ratio_prediction())}});
  }
  return out;
}

std::optional<Band> band_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return Band{*lo, *hi};
}

}  // namespace christoffel
