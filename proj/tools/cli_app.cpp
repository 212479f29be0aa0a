#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "christoffel/alpha_ball.hpp"
#include "christoffel/bounds.hpp"
#include "christoffel/christoffel.hpp"
#include "christoffel/domain_spec.hpp"
#include "christoffel/errors.hpp"
#include "christoffel/moments.hpp"
#include "christoffel/precision.hpp"
#include "christoffel/sweep.hpp"
#include "christoffel/verify.hpp"

namespace christoffel::cli {
namespace {

using nlohmann::json;

// Bad flags, bad config values, missing files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string domain;
  std::vector<int> degrees{10};
  std::vector<Vec2> points;
  std::string grid;
  std::optional<Vec2> direction;
  double beta = 0.0;  // <= 0: default_beta
  double sigma = kDefaultSigma;
  int grid_size = kDefaultGridSize;
  double ratio_threshold = 2.0;
  double mono_threshold = 4.0;
  std::string out;
  std::string format = "csv";
  int digits = 17;
  std::vector<std::string> suites;
  int rays = 5;
  bool corrupt_moments = false;
};

std::vector<double> split_numbers(const std::string& text, char sep = ',') {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + item + "'");
    }
  }
  return values;
}

Vec2 parse_vec(const std::string& text) {
  const auto v = split_numbers(text);
  if (v.size() != 2) throw ConfigError("expected x,y but got '" + text + "'");
  return {v[0], v[1]};
}

std::vector<int> parse_degrees(const std::string& text) {
  int lo = 0, hi = 0;
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, dots));
      hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw ConfigError("--n expects an integer or a..b, got '" + text + "'");
  }
  if (lo < 0 || hi > kMaxDegree || lo > hi)
    throw ConfigError("degrees must satisfy 0 <= a <= b <= 30");
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::string json_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void apply_config(RunConfig& cfg, const json& j) {
  try {
    if (j.contains("command")) cfg.command = j["command"].get<std::string>();
    if (j.contains("domain")) cfg.domain = json_text(j["domain"]);
    if (j.contains("n"))
      cfg.degrees = parse_degrees(j["n"].is_number() ? std::to_string(j["n"].get<int>())
                                                     : j["n"].get<std::string>());
    if (j.contains("points"))
      for (const auto& p : j["points"]) cfg.points.push_back({p.at(0), p.at(1)});
    if (j.contains("point")) cfg.points.push_back({j["point"].at(0), j["point"].at(1)});
    if (j.contains("grid")) cfg.grid = j["grid"].get<std::string>();
    if (j.contains("direction")) cfg.direction = Vec2{j["direction"].at(0), j["direction"].at(1)};
    if (j.contains("beta")) cfg.beta = j["beta"];
    if (j.contains("sigma")) cfg.sigma = j["sigma"];
    if (j.contains("grid_size")) cfg.grid_size = j["grid_size"];
    if (j.contains("ratio_threshold")) cfg.ratio_threshold = j["ratio_threshold"];
    if (j.contains("mono_threshold")) cfg.mono_threshold = j["mono_threshold"];
    if (j.contains("out")) cfg.out = j["out"];
    if (j.contains("format")) cfg.format = j["format"];
    if (j.contains("digits")) cfg.digits = j["digits"];
    if (j.contains("suites")) cfg.suites = j["suites"].get<std::vector<std::string>>();
    if (j.contains("rays")) cfg.rays = j["rays"];
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

json read_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && text[first] == '{') return json::parse(text);
    std::ifstream in(text);
    if (!in) throw ConfigError("cannot open config file: " + text);
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.grid_size < 16) throw ConfigError("--grid-size must be >= 16");
  if (!(cfg.sigma > 0.0)) throw ConfigError("--sigma must be positive");
  if (cfg.digits < 1 || cfg.digits > 50) throw ConfigError("--digits must be in [1, 50]");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format is csv or json");
  if (!(cfg.ratio_threshold > 1.0) || !(cfg.mono_threshold > 1.0))
    throw ConfigError("thresholds must exceed 1");
  if (cfg.rays < 2) throw ConfigError("--rays must be >= 2");
}

ConvexBody domain_of(const RunConfig& cfg) {
  if (cfg.domain.empty()) throw ConfigError("--domain is required");
  return load_domain(cfg.domain);
}

// Explicit points plus grid points inside the body. The grid spec is
// "nx,ny" over the bounding box or "x0,x1,nx,y0,y1,ny"; cell centers are used.
std::vector<Vec2> points_of(const RunConfig& cfg, const ConvexBody& body, std::ostream& err,
                            bool required = true) {
  std::vector<Vec2> points = cfg.points;
  if (!cfg.grid.empty()) {
    const auto g = split_numbers(cfg.grid);
    Box box = body.bbox();
    int nx = 0, ny = 0;
    if (g.size() == 2) {
      nx = static_cast<int>(g[0]);
      ny = static_cast<int>(g[1]);
    } else if (g.size() == 6) {
      box = {g[0], g[1], g[3], g[4]};
      nx = static_cast<int>(g[2]);
      ny = static_cast<int>(g[5]);
    } else {
      throw ConfigError("--grid expects nx,ny or x0,x1,nx,y0,y1,ny");
    }
    if (nx < 1 || ny < 1) throw ConfigError("grid counts must be positive");
    int skipped = 0;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const Vec2 p{box.xmin + (ix + 0.5) * box.width() / nx,
                     box.ymin + (iy + 0.5) * box.height() / ny};
        if (body.contains(p))
          points.push_back(p);
        else
          ++skipped;
      }
    if (skipped > 0) err << "note: " << skipped << " grid points outside the domain skipped\n";
  }
  if (required && points.empty()) throw ConfigError("no evaluation points (use --point or --grid)");
  for (const Vec2& p : cfg.points)
    if (!body.contains(p))
      err << "warning: point (" << p.x << ", " << p.y << ") is outside the domain\n";
  return points;
}

// Outward unit direction: --direction if given, else toward the nearest
// boundary point.
Vec2 direction_at(const RunConfig& cfg, const ConvexBody& body, Vec2 x) {
  if (cfg.direction) return normalized(*cfg.direction);
  if (body.kind() == BodyKind::alpha_ball && body.alpha() > 1.0 && body.alpha() < 2.0)
    return nearest_boundary_point_exact(AlphaBall(body.alpha()), x).normal;
  const BoundaryPoint bp = nearest_boundary_point(body, x);
  return normalized(bp.foot - x);
}

// Writes a table as CSV or as a JSON array of objects. Cells are already
// formatted; empty cells become null in JSON.
void write_table(std::ostream& out, const RunConfig& cfg, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows,
                 const std::vector<std::string>& comments = {}) {
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t k = 0; k < header.size(); ++k) {
        const std::string& cell = row[k];
        if (cell.empty())
          obj[header[k]] = nullptr;
        else if (cell.find_first_not_of("0123456789+-.eE") == std::string::npos)
          obj[header[k]] = json::parse(cell);
        else
          obj[header[k]] = cell;
      }
      arr.push_back(obj);
    }
    out << arr.dump(2) << '\n';
    return;
  }
  for (const auto& c : comments) out << "# " << c << '\n';
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << '\n';
  }
}

std::string num(double v, const RunConfig& cfg) { return to_decimal(v, cfg.digits); }

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ConvexBody body = domain_of(cfg);
  const auto points = points_of(cfg, body, err);
  std::vector<std::vector<std::string>> rows;
  for (int n : cfg.degrees) {
    const ChristoffelEvaluator ev = ChristoffelEvaluator::for_body(body, n);
    for (const Vec2& p : points) {
      const Evaluation e = evaluate(ev, p);
      rows.push_back({num(p.x, cfg), num(p.y, cfg), std::to_string(n),
                      to_decimal(e.lambda_exact, cfg.digits)});
    }
  }
  write_table(out, cfg, {"x", "y", "n", "lambda"}, rows);
  return kOk;
}

int cmd_sections(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ConvexBody body = domain_of(cfg);
  const auto points = points_of(cfg, body, err);
  if (points.size() != 1) throw ConfigError("sections takes exactly one point");
  const Vec2 x = points.front();
  if (!body.contains(x)) throw PointOutsideDomain("point is outside the domain");
  const Vec2 u = direction_at(cfg, body, x);
  const double beta = cfg.beta > 0.0 ? cfg.beta : default_beta(body, x, u);
  const SectionProfile prof = section_profile(body, RayConfig::toward(x, u), beta, cfg.grid_size);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < prof.t_grid.size(); ++k)
    rows.push_back({num(prof.t_grid[k], cfg), num(prof.l1[k], cfg), num(prof.l2[k], cfg)});
  write_table(out, cfg, {"t", "l1", "l2"}, rows,
              {"delta=" + num(prof.delta, cfg), "beta=" + num(beta, cfg),
               "u=" + num(u.x, cfg) + "," + num(u.y, cfg)});
  return kOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ConvexBody body = domain_of(cfg);
  const auto points = points_of(cfg, body, err);
  std::vector<std::vector<std::string>> rows;
  for (int n : cfg.degrees) {
    const ChristoffelEvaluator ev = ChristoffelEvaluator::for_body(body, n);
    for (const Vec2& x : points) {
      if (!body.contains(x)) continue;
      const Vec2 u = direction_at(cfg, body, x);
      const double beta = cfg.beta > 0.0 ? cfg.beta : default_beta(body, x, u);
      try {
        const BoundEstimate b = two_sided_report(body, x, u, n, beta, cfg.sigma, ev, cfg.grid_size);
        std::string l1l2, mono, pass;
        if (!b.deep_interior) {
          const ConditionReport c = check_conditions(
              section_profile(body, RayConfig::toward(x, u), beta, cfg.grid_size),
              cfg.ratio_threshold, cfg.mono_threshold);
          l1l2 = num(c.ratio_l1_l2_max, cfg);
          mono = num(c.quasi_monotonicity_defect, cfg);
          pass = c.passes ? "1" : "0";
        }
        rows.push_back({num(x.x, cfg), num(x.y, cfg), std::to_string(n), num(b.delta, cfg),
                        num(beta, cfg), num(*b.lambda_exact, cfg), num(b.lower_shape, cfg),
                        num(b.upper_shape, cfg), num(b.ratio_lower(), cfg),
                        num(b.ratio_upper(), cfg), b.deep_interior ? "1" : "0", l1l2, mono,
                        pass});
      } catch (const TooCloseToBoundary&) {
        err << "note: skipping (" << x.x << ", " << x.y << ") at n=" << n
            << ": delta <= sigma n^-2\n";
      }
    }
  }
  write_table(out, cfg,
              {"x", "y", "n", "delta", "beta", "lambda", "lower_shape", "upper_shape",
               "ratio_lower", "ratio_upper", "deep_interior", "ratio_l1_l2_max",
               "quasi_monotonicity_defect", "conditions_pass"},
              rows);
  return kOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ConvexBody body = domain_of(cfg);
  if (body.kind() != BodyKind::alpha_ball) throw ConfigError("predict needs an alpha_ball domain");
  const AlphaBall ball(body.alpha());
  const auto points = points_of(cfg, body, err);
  std::vector<std::vector<std::string>> rows;
  for (int n : cfg.degrees)
    for (const Vec2& x : points) {
      if (!body.contains(x)) continue;
      const AlphaBallPoint p = nearest_boundary_point_exact(ball, x);
      const double nn = static_cast<double>(n);
      if (p.delta < cfg.sigma / (nn * nn)) {
        err << "note: skipping (" << x.x << ", " << x.y << ") at n=" << n
            << ": delta < sigma n^-2\n";
        continue;
      }
      rows.push_back({num(x.x, cfg), num(x.y, cfg), num(p.x0, cfg), num(p.delta, cfg),
                      std::to_string(n), num(prediction_shape(ball, p.x0, p.delta, n), cfg)});
    }
  write_table(out, cfg, {"x", "y", "x0", "delta", "n", "prediction"}, rows);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ConvexBody body = domain_of(cfg);
  const bool is_alpha =
      body.kind() == BodyKind::alpha_ball && body.alpha() > 1.0 && body.alpha() < 2.0;
  std::vector<SweepPoint> points;
  SweepOptions opts;
  opts.beta = cfg.beta;
  opts.sigma = cfg.sigma;
  opts.grid_size = cfg.grid_size;

  const auto explicit_points = points_of(cfg, body, err, false);
  if (!explicit_points.empty()) {
    for (const Vec2& x : explicit_points) {
      if (!body.contains(x)) continue;
      SweepPoint p;
      p.x = x;
      if (is_alpha) {
        const AlphaBallPoint q = nearest_boundary_point_exact(AlphaBall(body.alpha()), x);
        p.u = q.normal;
        p.foot = q.foot;
        p.delta = q.delta;
        p.x0 = q.x0;
      } else {
        const BoundaryPoint bp = nearest_boundary_point(body, x);
        p.foot = bp.foot;
        p.delta = bp.delta;
        p.u = normalized(bp.foot - x);
      }
      points.push_back(p);
    }
  } else if (body.kind() == BodyKind::disk) {
    std::vector<double> radii;
    for (int k = 0; k < 40; ++k) radii.push_back(0.98 * k / 39.0);
    points = disk_radial_points(radii);
  } else if (is_alpha) {
    const AlphaBall ball(body.alpha());
    points = alpha_ball_ray_points(ball, cfg.rays, geometric_grid(1e-3, ball.c0, 12));
    opts.max_delta = ball.c0;
  } else {
    throw ConfigError("sweep on this domain needs --point or --grid");
  }

  const auto rows = run_sweep(body, points, cfg.degrees, opts);
  if (cfg.format == "json")
    out << sweep_to_json(rows).dump(2) << '\n';
  else
    write_sweep_csv(out, rows, cfg.digits);
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&, bool degree_given) {
  std::vector<ConvexBody> bodies;
  if (cfg.domain.empty()) {
    bodies = {ConvexBody::unit_disk(), ConvexBody::alpha_ball(1.2), ConvexBody::alpha_ball(1.5),
              ConvexBody::alpha_ball(1.8)};
  } else {
    bodies.push_back(load_domain(cfg.domain));
  }
  VerifyOptions opts;
  opts.suites = cfg.suites;
  opts.corrupt_moments = cfg.corrupt_moments;
  if (degree_given) opts.max_degree = cfg.degrees.back();

  json report;
  report["domains"] = json::array();
  bool passed = true;
  for (const ConvexBody& body : bodies) {
    const json summary = verify_summary(body, run_verify(body, opts));
    passed = passed && summary["passed"].get<bool>();
    report["domains"].push_back(summary);
  }
  report["passed"] = passed;
  out << report.dump(2) << '\n';
  return passed ? kOk : kVerifyFailed;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
  const ConvexBody body = domain_of(cfg);
  out << moments_for(body, cfg.degrees.back()).to_json(cfg.digits).dump(2) << '\n';
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Christoffel functions of planar convex domains", "christoffel"};
  app.require_subcommand(0, 1);

  std::string config_text, domain, n_text, grid, direction, out_path, format;
  std::vector<std::string> point_texts, suites;
  double beta = 0, sigma = 0, ratio_threshold = 0, mono_threshold = 0;
  int grid_size = 0, digits = 0, rays = 0;
  bool corrupt = false;

  std::vector<CLI::App*> subs;
  for (const char* name : {"eval", "sections", "bounds", "predict", "sweep", "verify", "moments"})
    subs.push_back(app.add_subcommand(name));
  subs[0]->description("lambda_n at points");
  subs[1]->description("section profile t, l1, l2 at one point");
  subs[2]->description("two-sided bound shapes and lambda_n");
  subs[3]->description("B_alpha prediction shape");
  subs[4]->description("sweep of lambda_n against the shapes");
  subs[5]->description("run the invariant suites");
  subs[6]->description("moment table as JSON");
  for (auto* s : subs) s->fallthrough();

  app.add_option("--config", config_text, "JSON config file or inline JSON");
  app.add_option("--domain", domain, "domain spec: inline JSON or file path");
  app.add_option("--n", n_text, "degree n or range a..b");
  app.add_option("--point", point_texts, "evaluation point x,y (repeatable)");
  app.add_option("--grid", grid, "point grid nx,ny or x0,x1,nx,y0,y1,ny");
  app.add_option("--direction", direction, "outward unit direction ux,uy");
  app.add_option("--beta", beta, "profile cutoff beta");
  app.add_option("--sigma", sigma, "boundary layer constant sigma");
  app.add_option("--grid-size", grid_size, "profile grid size (>= 16)");
  app.add_option("--ratio-threshold", ratio_threshold, "l1/l2 imbalance threshold");
  app.add_option("--mono-threshold", mono_threshold, "quasi-monotonicity threshold");
  app.add_option("--rays", rays, "rays for the B_alpha sweep");
  app.add_option("--out", out_path, "output path (stdout when absent)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--digits", digits, "significant digits (<= 50)");
  app.add_option("--suite", suites, "verify suite to run (repeatable)");
  app.add_flag("--corrupt-moments", corrupt)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig cfg;
    if (!config_text.empty()) apply_config(cfg, read_json(config_text));
    for (auto* s : subs)
      if (s->parsed()) cfg.command = s->get_name();
    if (cfg.command.empty()) throw ConfigError("a subcommand is required");

    const auto given = [&](const char* flag) { return app.count(flag) > 0; };
    if (given("--domain")) cfg.domain = domain;
    if (given("--n")) cfg.degrees = parse_degrees(n_text);
    if (given("--point")) {
      cfg.points.clear();
      for (const auto& p : point_texts) cfg.points.push_back(parse_vec(p));
    }
    if (given("--grid")) cfg.grid = grid;
    if (given("--direction")) cfg.direction = parse_vec(direction);
    if (given("--beta")) cfg.beta = beta;
    if (given("--sigma")) cfg.sigma = sigma;
    if (given("--grid-size")) cfg.grid_size = grid_size;
    if (given("--ratio-threshold")) cfg.ratio_threshold = ratio_threshold;
    if (given("--mono-threshold")) cfg.mono_threshold = mono_threshold;
    if (given("--rays")) cfg.rays = rays;
    if (given("--out")) cfg.out = out_path;
    if (given("--format")) cfg.format = format;
    if (given("--digits")) cfg.digits = digits;
    if (given("--suite")) cfg.suites = suites;
    cfg.corrupt_moments = corrupt;
    validate(cfg);

    use_working_precision();
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ConfigError("cannot open output file: " + cfg.out);
    }
    std::ostream& data = cfg.out.empty() ? out : file;

    const std::string& c = cfg.command;
    if (c == "eval") return cmd_eval(cfg, data, err);
    if (c == "sections") return cmd_sections(cfg, data, err);
    if (c == "bounds") return cmd_bounds(cfg, data, err);
    if (c == "predict") return cmd_predict(cfg, data, err);
    if (c == "sweep") return cmd_sweep(cfg, data, err);
    if (c == "verify")
      return cmd_verify(cfg, data, err, given("--n") || (!config_text.empty() &&
                                                         read_json(config_text).contains("n")));
    if (c == "moments") return cmd_moments(cfg, data);
    throw ConfigError("unknown command: " + c);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PointOutsideDomain& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OutOfRange& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace christoffel::cli
