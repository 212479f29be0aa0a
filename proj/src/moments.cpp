#include "christoffel/moments.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "christoffel/errors.hpp"

namespace christoffel {

MomentTable::MomentTable(int max_total_degree) : degree_(max_total_degree) {
  if (max_total_degree < 0) throw std::invalid_argument("moment degree must be >= 0");
  use_working_precision();
  values_.assign(index(2 * degree_ + 1, 0), Real(0));
}

nlohmann::json MomentTable::to_json(int digits) const {
  nlohmann::json rows = nlohmann::json::array();
  for (int s = 0; s <= max_moment_degree(); ++s)
    for (int j = 0; j <= s; ++j)
      rows.push_back({s - j, j, to_decimal((*this)(s - j, j), digits)});
  return {{"degree", degree_}, {"moments", rows}};
}

MomentTable MomentTable::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("moments"))
    throw std::invalid_argument("moment table JSON needs \"degree\" and \"moments\"");
  MomentTable table(j.at("degree").get<int>());
  std::vector<bool> seen(table.values_.size(), false);
  for (const auto& row : j.at("moments")) {
    const int i = row.at(0).get<int>();
    const int k = row.at(1).get<int>();
    if (i < 0 || k < 0 || i + k > table.max_moment_degree())
      throw std::invalid_argument("moment index out of range");
    table.at(i, k) = parse_real(row.at(2).get<std::string>());
    seen[index(i, k)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::invalid_argument("moment table JSON is incomplete");
  return table;
}

namespace {

void check_degree(int max_degree) {
  if (max_degree < 0 || max_degree > kMaxMomentDegree)
    throw std::invalid_argument("moment degree must be in [0, 64]");
}

}  // namespace

MomentTable disk_moments(int max_degree) {
  check_degree(max_degree);
  MomentTable table(max_degree);
  const Real half = Real(1) / 2;
  for (int s = 0; s <= table.max_moment_degree(); s += 2) {
    for (int j = 0; j <= s; j += 2) {
      const int a = (s - j) / 2;
      const int b = j / 2;
      table.at(2 * a, 2 * b) = boost::multiprecision::tgamma(Real(a) + half) *
                               boost::multiprecision::tgamma(Real(b) + half) /
                               boost::multiprecision::tgamma(Real(a + b + 2));
    }
  }
  return table;
}

MomentTable alpha_ball_moments(double alpha, int max_degree) {
  check_degree(max_degree);
  if (!(alpha >= 1.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha_ball_moments needs a finite alpha >= 1");
  MomentTable table(max_degree);
  const Real a(alpha);
  const Real scale = Real(4) / (a * a);
  for (int s = 0; s <= table.max_moment_degree(); s += 2) {
    for (int j = 0; j <= s; j += 2) {
      const int p = s - j;
      table.at(p, j) = scale * boost::multiprecision::tgamma(Real(p + 1) / a) *
                       boost::multiprecision::tgamma(Real(j + 1) / a) /
                       boost::multiprecision::tgamma(Real(s + 2) / a + 1);
    }
  }
  return table;
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Chord {
  double low = 0.0;
  double high = 0.0;
};

// Vertical chords of a convex body. Each vertical line meets the segment
// joining the leftmost and rightmost support points, which seeds the search.
class ChordFinder {
 public:
  explicit ChordFinder(const ConvexBody& body)
      : body_(body),
        left_(body.support_point({-1.0, 0.0})),
        right_(body.support_point({1.0, 0.0})) {}

  double xmin() const { return left_.x; }
  double xmax() const { return right_.x; }

  Chord at(double x) const {
    const double span = right_.x - left_.x;
    const double w = std::clamp((x - left_.x) / span, 0.0, 1.0);
    const Vec2 seed{x, left_.y + w * (right_.y - left_.y)};
    if (!body_.contains(seed)) return {seed.y, seed.y};
    return {edge(seed, -1.0), edge(seed, 1.0)};
  }

 private:
  // Last member ordinate from `seed` in direction `sign`, to adjacent doubles.
  double edge(Vec2 seed, double sign) const {
    const Box& box = body_.bbox();
    double step = 1e-3 * std::max(box.height(), 1e-300);
    double inside = seed.y;
    double outside = seed.y;
    while (true) {
      const double y = seed.y + sign * step;
      if (!body_.contains({seed.x, y})) {
        outside = y;
        break;
      }
      inside = y;
      if (y < box.ymin || y > box.ymax) throw NoExteriorFound("chord leaves the bounding box");
      step *= 2.0;
    }
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      if (body_.contains({seed.x, mid}))
        inside = mid;
      else
        outside = mid;
    }
    return inside;
  }

  const ConvexBody& body_;
  Vec2 left_;
  Vec2 right_;
};

struct Node {
  double x;
  double weight;
  Chord chord;
};

// A Gauss-Kronrod panel with its cached chords and per-moment double
// precision estimates.
struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::vector<Node> nodes;
  std::vector<double> error;     // |K15 - G7| per moment
  std::vector<double> absolute;  // K15 of |x|^i |y|^j per moment
  double priority = 0.0;
};

class PanelIntegrator {
 public:
  PanelIntegrator(const ChordFinder& chords, int max_moment_degree)
      : chords_(chords), degree_(max_moment_degree) {
    count_ = MomentTable::index(0, degree_ + 1);
  }

  std::size_t moment_count() const { return count_; }

  Panel make(double a, double b) const {
    static const auto& abscissa = Kronrod::abscissa();
    static const auto& kweights = Kronrod::weights();
    static const auto& gweights = Gauss::weights();
    Panel p;
    p.a = a;
    p.b = b;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    // Kronrod nodes at even positions are the Gauss nodes.
    std::vector<double> gauss_weight;
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      const double gw = (k % 2 == 0) ? gweights[k / 2] : 0.0;
      if (k == 0) {
        p.nodes.push_back({c, h * kweights[0], chords_.at(c)});
        gauss_weight.push_back(h * gw);
        continue;
      }
      for (double sign : {-1.0, 1.0}) {
        const double x = c + sign * h * abscissa[k];
        p.nodes.push_back({x, h * kweights[k], chords_.at(x)});
        gauss_weight.push_back(h * gw);
      }
    }

    std::vector<double> kron(count_, 0.0);
    std::vector<double> gauss(count_, 0.0);
    p.absolute.assign(count_, 0.0);
    std::vector<double> xp(static_cast<std::size_t>(degree_) + 1);
    std::vector<double> yi(static_cast<std::size_t>(degree_) + 1);
    std::vector<double> ya(static_cast<std::size_t>(degree_) + 1);
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
      const Node& node = p.nodes[k];
      fill_powers(node, xp, yi, ya);
      for (int s = 0; s <= degree_; ++s) {
        for (int j = 0; j <= s; ++j) {
          const std::size_t idx = MomentTable::index(s - j, j);
          const double v = xp[static_cast<std::size_t>(s - j)] * yi[static_cast<std::size_t>(j)];
          kron[idx] += node.weight * v;
          gauss[idx] += gauss_weight[k] * v;
          p.absolute[idx] += node.weight * std::abs(xp[static_cast<std::size_t>(s - j)]) *
                             ya[static_cast<std::size_t>(j)];
        }
      }
    }
    p.error.resize(count_);
    for (std::size_t idx = 0; idx < count_; ++idx) p.error[idx] = std::abs(kron[idx] - gauss[idx]);
    return p;
  }

  // Extended-precision Kronrod sums of a finished panel into `table`.
  void accumulate(const Panel& p, MomentTable& table) const {
    const auto d = static_cast<std::size_t>(degree_);
    std::vector<Real> xp(d + 1);
    std::vector<Real> yi(d + 1);
    Real weighted;
    for (const Node& node : p.nodes) {
      const Real x(node.x);
      const Real lo(node.chord.low);
      const Real hi(node.chord.high);
      xp[0] = Real(node.weight);
      Real plo = lo;
      Real phi = hi;
      for (std::size_t j = 0; j <= d; ++j) {
        if (j > 0) xp[j] = xp[j - 1] * x;
        yi[j] = (phi - plo) / static_cast<unsigned>(j + 1);
        plo *= lo;
        phi *= hi;
      }
      for (int s = 0; s <= degree_; ++s) {
        for (int j = 0; j <= s; ++j) {
          weighted = xp[static_cast<std::size_t>(s - j)];
          weighted *= yi[static_cast<std::size_t>(j)];
          table.at(s - j, j) += weighted;
        }
      }
    }
  }

 private:
  void fill_powers(const Node& node, std::vector<double>& xp, std::vector<double>& yi,
                   std::vector<double>& ya) const {
    const double lo = node.chord.low;
    const double hi = node.chord.high;
    double plo = lo;
    double phi = hi;
    double alo = std::abs(lo);
    double ahi = std::abs(hi);
    const bool straddles = lo < 0.0 && hi > 0.0;
    xp[0] = 1.0;
    for (std::size_t j = 0; j < xp.size(); ++j) {
      if (j > 0) xp[j] = xp[j - 1] * node.x;
      const double inv = 1.0 / static_cast<double>(j + 1);
      yi[j] = (phi - plo) * inv;
      ya[j] = straddles ? (alo + ahi) * inv : std::abs(phi - plo) * inv;
      plo *= lo;
      phi *= hi;
      alo *= std::abs(lo);
      ahi *= std::abs(hi);
    }
  }

  const ChordFinder& chords_;
  int degree_;
  std::size_t count_;
};

}  // namespace

MomentTable quadrature_moments(const ConvexBody& body, int max_degree, double tol,
                               QuadratureStats* stats) {
  check_degree(max_degree);
  if (!(tol >= 1e-12)) throw std::invalid_argument("quadrature tolerance must be >= 1e-12");

  const ChordFinder chords(body);
  const PanelIntegrator integrator(chords, 2 * max_degree);
  const std::size_t count = integrator.moment_count();
  const double xmin = chords.xmin();
  const double xmax = chords.xmax();
  const double min_width = 1e-14 * (xmax - xmin);
  constexpr int kInitialPanels = 16;
  constexpr std::size_t kMaxPanels = 40000;

  std::vector<Panel> panels;
  std::vector<double> total_error(count, 0.0);
  std::vector<double> total_abs(count, 0.0);
  const auto add = [&](Panel p) {
    for (std::size_t i = 0; i < count; ++i) {
      total_error[i] += p.error[i];
      total_abs[i] += p.absolute[i];
    }
    panels.push_back(std::move(p));
  };
  for (int k = 0; k < kInitialPanels; ++k) {
    const double a = xmin + (xmax - xmin) * k / kInitialPanels;
    const double b = k + 1 == kInitialPanels ? xmax : xmin + (xmax - xmin) * (k + 1) / kInitialPanels;
    add(integrator.make(a, b));
  }

  const auto relative_error = [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i)
      if (total_abs[i] > 0.0) worst = std::max(worst, total_error[i] / total_abs[i]);
    return worst;
  };
  const auto priority_of = [&](const Panel& p) {
    if (p.b - p.a < min_width) return -1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i)
      if (total_abs[i] > 0.0) worst = std::max(worst, p.error[i] / total_abs[i]);
    return worst;
  };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> queue;
  for (std::size_t k = 0; k < panels.size(); ++k) queue.push({priority_of(panels[k]), k});

  double achieved = relative_error();
  while (achieved > tol) {
    if (queue.empty() || queue.top().first <= 0.0 || panels.size() >= kMaxPanels) {
      if (stats != nullptr) *stats = {static_cast<int>(panels.size()), achieved};
      throw NonConvergence("moment quadrature stalled above tolerance", achieved);
    }
    const std::size_t k = queue.top().second;
    queue.pop();
    const Panel old = std::move(panels[k]);
    for (std::size_t i = 0; i < count; ++i) {
      total_error[i] -= old.error[i];
      total_abs[i] -= old.absolute[i];
    }
    const double mid = 0.5 * (old.a + old.b);
    Panel left = integrator.make(old.a, mid);
    Panel right = integrator.make(mid, old.b);
    for (std::size_t i = 0; i < count; ++i) {
      total_error[i] += left.error[i] + right.error[i];
      total_abs[i] += left.absolute[i] + right.absolute[i];
    }
    panels[k] = std::move(left);
    panels.push_back(std::move(right));
    queue.push({priority_of(panels[k]), k});
    queue.push({priority_of(panels.back()), panels.size() - 1});
    achieved = relative_error();
  }

  MomentTable table(max_degree);
  for (const Panel& p : panels) integrator.accumulate(p, table);
  if (stats != nullptr) *stats = {static_cast<int>(panels.size()), achieved};
  return table;
}

MomentTable moments_for(const ConvexBody& body, int max_degree, double tol) {
  switch (body.kind()) {
    case BodyKind::disk: return disk_moments(max_degree);
    case BodyKind::alpha_ball: return alpha_ball_moments(body.alpha(), max_degree);
    default: return quadrature_moments(body, max_degree, tol);
  }
}

std::vector<std::pair<int, int>> monomial_exponents(int n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(basis_size(n)));
  for (int s = 0; s <= n; ++s)
    for (int j = 0; j <= s; ++j) out.emplace_back(s - j, j);
  return out;
}

GramMatrix::GramMatrix(int n, std::vector<Real> entries)
    : n_(n), dim_(basis_size(n)), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("Gram matrix entries do not match the basis size");
}

GramMatrix gram_matrix(const MomentTable& moments, int n) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  if (moments.max_total_degree() < n)
    throw InsufficientMoments("moment table is too shallow for the requested degree");
  const auto exps = monomial_exponents(n);
  const std::size_t dim = exps.size();
  std::vector<Real> entries(dim * dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      entries[r * dim + c] = moments(exps[r].first + exps[c].first, exps[r].second + exps[c].second);
  return GramMatrix(n, std::move(entries));
}

}  // namespace christoffel
