#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "christoffel/alpha_ball.hpp"
#include "christoffel/bounds.hpp"

namespace christoffel {

// An evaluation point with its nearest boundary point and the outward
// direction used for the section profile.
struct SweepPoint {
  Vec2 x;
  Vec2 u;
  Vec2 foot;
  double delta = 0.0;
  // Canonical-octant foot abscissa (alpha balls only).
  std::optional<double> x0;
  int ray = 0;
};

struct SweepRow {
  std::optional<double> alpha;
  SweepPoint point;
  int n = 0;
  double lambda = 0.0;
  std::optional<double> lower_shape;
  std::optional<double> upper_shape;
  std::optional<double> prediction;
  bool deep_interior = false;

  std::optional<double> ratio_lower() const;
  std::optional<double> ratio_upper() const;
  std::optional<double> ratio_prediction() const;
};

// Points (r, 0) of the unit disk, u = (1, 0).
std::vector<SweepPoint> disk_radial_points(const std::vector<double>& radii);

// Rays along the inward normals at the canonical-octant boundary points
// x0 = k/(rays-1) * 2^(-1/alpha), k = 0..rays-1 (pole to diagonal). Each
// point sits at the given depth below its ray's foot; delta, foot and u come
// from the exact nearest boundary point.
std::vector<SweepPoint> alpha_ball_ray_points(const AlphaBall& ball, int rays,
                                              const std::vector<double>& depths);

struct SweepOptions {
  double beta = 0.0;  // <= 0 selects default_beta per point
  double sigma = kDefaultSigma;
  int grid_size = kDefaultGridSize;
  bool with_bounds = true;
  // Keep only delta in [sigma n^-2, max_delta]; max_delta <= 0 keeps all.
  double max_delta = 0.0;
  // Moment table to build evaluators from; moments_for(body) when null.
  const MomentTable* moments = nullptr;
};

// One row per (n, point) with sigma n^-2 <= delta, ordered by n then point.
// Predictions: prediction_shape for alpha balls, n^-2 sqrt(1 - |x|^2)
// for the disk, none otherwise.
std::vector<SweepRow> run_sweep(const ConvexBody& body, const std::vector<SweepPoint>& points,
                                const std::vector<int>& degrees, const SweepOptions& options);

// Columns: alpha, x, y, x0, y0, delta, n, lambda, lower_shape, upper_shape,
// prediction, ratio_lower, ratio_upper, ratio_prediction. Missing values
// are empty cells.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int digits = 17);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

// max/min of the present values; nullopt when none are present.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi / lo; }
};
std::optional<Band> band_of(const std::vector<double>& values);

}  // namespace christoffel
