#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "christoffel/geometry.hpp"

namespace christoffel {

// Invariant suites run by `christoffel verify`.
inline const std::vector<std::string> kVerifySuites = {
    "moment_oracle_agreement", "gram_factorization", "degree_monotonicity",
    "extremal_property",       "minimizer_contract", "chord_consistency",
    "ellipse_containment",     "shape_band"};

struct VerifyOptions {
  std::vector<std::string> suites;  // empty runs all of them
  int max_degree = 10;
  unsigned seed = 20240611u;
  // Test hook: scales the moment (2, 0) by 1.25 before any suite runs.
  bool corrupt_moments = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string message;
  nlohmann::json measured = nlohmann::json::object();
};

std::vector<SuiteResult> run_verify(const ConvexBody& body, const VerifyOptions& options);

// {"domain": ..., "passed": bool, "failed": [names], "suites": [...]}.
nlohmann::json verify_summary(const ConvexBody& body, const std::vector<SuiteResult>& results);

// Integrals of 1, x, y, x^2, xy, y^2 over the body from area formulas
// independent of the moment tables: shoelace sums for polygons, the map
// applied to the base's second-moment matrix for affine images, closed
// forms for the disk and alpha balls.
std::array<double, 6> low_order_moments(const ConvexBody& body);

}  // namespace christoffel
