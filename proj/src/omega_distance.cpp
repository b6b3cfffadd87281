#include "blochcert/omega_distance.hpp"

#include "blochcert/errors.hpp"
#include "blochcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace blochcert {

void GeodesicConfig::validate() const {
  if (control_points < 2) throw InvalidArgument("GeodesicConfig: control_points must be >= 2");
  if (max_iters < 0) throw InvalidArgument("GeodesicConfig: max_iters must be >= 0");
  if (!(step > 0.0)) throw InvalidArgument("GeodesicConfig: step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidArgument("GeodesicConfig: shrink must lie in (0,1)");
  if (!(tol > 0.0)) throw InvalidArgument("GeodesicConfig: tol must be positive");
  if (!(margin >= 0.0)) throw InvalidArgument("GeodesicConfig: margin must be nonnegative");
  if (!(integrate_tol > 0.0)) throw InvalidArgument("GeodesicConfig: integrate_tol must be positive");
}

double omega_length(const Polyline& p, const Weight& w, double tol) {
  for (const Vector& v : p.points()) {
    if (!contains(w.domain(), v, 0.0)) throw DomainError("omega_length: path leaves the domain of '" + w.label() + "'");
  }
  return integrate([&w](const Vector& x) { return w(x); }, p, tol);
}

DistanceResult omega_distance(const Vector& x, const Vector& y, const Weight& w, const GeodesicConfig& cfg,
                              NormSpec n) {
  cfg.validate();
  require_same_dim(x, y, "omega_distance");
  if (x == y) throw InvalidArgument("omega_distance: endpoints coincide");
  const ConvexDomain& dom = w.domain();
  if (!contains(dom, x, cfg.margin) || !contains(dom, y, cfg.margin)) {
    throw DomainError("omega_distance: endpoint outside the margin-shrunk domain of '" + w.label() + "'");
  }

  const int count = cfg.control_points;
  const auto last = static_cast<std::size_t>(count - 1);
  std::vector<Vector> pts(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i <= last; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(last);
    pts[i] = (1.0 - t) * x + t * y;
  }
  pts.front() = x;
  pts.back() = y;

  const ScalarField field = [&w](const Vector& p) { return w(p); };
  const double seg_tol = cfg.integrate_tol / static_cast<double>(last);
  auto seg = [&](const Vector& a, const Vector& b) { return integrate_segment(field, a, b, seg_tol, n); };

  std::vector<double> cost(last);
  for (std::size_t i = 0; i < last; ++i) cost[i] = seg(pts[i], pts[i + 1]);
  auto total_cost = [&] { return std::accumulate(cost.begin(), cost.end(), 0.0); };

  const double spacing = distance(x, y, n) / static_cast<double>(last);
  const double step_cap = std::min(cfg.step, spacing);
  const double step_floor = 1e-3 * step_cap;
  const Eigen::Index dim = x.size();
  std::vector<double> steps(last > 1 ? (last - 1) * static_cast<std::size_t>(dim) : 0, step_cap);

  std::vector<double> history{total_cost()};
  int iterations = 0;
  bool converged = last < 2;
  while (!converged && iterations < cfg.max_iters) {
    ++iterations;
    const double before = history.back();
    for (std::size_t i = 1; i < last; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        double& s = steps[(i - 1) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
        bool improved = false;
        for (const double sign : {1.0, -1.0}) {
          Vector cand = pts[i];
          cand[j] += sign * s;
          cand = project(dom, cand, cfg.margin);
          if (cand == pts[i] || cand == pts[i - 1] || cand == pts[i + 1]) continue;
          const double a = seg(pts[i - 1], cand);
          const double b = seg(cand, pts[i + 1]);
          if (a + b < cost[i - 1] + cost[i]) {
            pts[i] = std::move(cand);
            cost[i - 1] = a;
            cost[i] = b;
            improved = true;
            break;
          }
        }
        s = improved ? std::min(2.0 * s, step_cap) : s * cfg.shrink;
      }
    }
    const double after = total_cost();
    // per-segment improvements are strict, so only summation order can lift the total
    history.push_back(std::min(after, before));
    const double max_step = *std::max_element(steps.begin(), steps.end());
    converged = before - after < cfg.tol && max_step < step_floor;
  }

  Polyline path(std::move(pts), n);
  const double value = omega_length(path, w, cfg.integrate_tol);
  return DistanceResult{value, std::move(path), iterations, converged, std::move(history)};
}

// ---------------------------------------------------------------------------

double omega_distance_grid_oracle(const Vector& x, const Vector& y, const Weight& w, int resolution,
                                  const GridOracleOptions& opts) {
  if (x.size() != 2 || y.size() != 2) throw InvalidArgument("grid oracle supports dimension 2 only");
  if (resolution < 2) throw InvalidArgument("grid oracle: resolution must be >= 2");
  if (opts.stencil < 1) throw InvalidArgument("grid oracle: stencil must be >= 1");
  const ConvexDomain& dom = w.domain();
  if (!contains(dom, x, opts.margin) || !contains(dom, y, opts.margin)) {
    throw DomainError("grid oracle: endpoint outside the margin-shrunk domain");
  }

  Vector lo, hi;
  if (dom.bounded()) {
    std::tie(lo, hi) = dom.bounding_box(2);
  } else {
    const double pad = std::max(0.5 * (x - y).norm(), 1.0);
    lo = x.cwiseMin(y).array() - pad;
    hi = x.cwiseMax(y).array() + pad;
  }
  const double h = (hi - lo).maxCoeff() / resolution;
  const int nx = static_cast<int>(std::ceil((hi[0] - lo[0]) / h)) + 1;
  const int ny = static_cast<int>(std::ceil((hi[1] - lo[1]) / h)) + 1;
  const auto node_count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  auto node_point = [&](std::size_t k) {
    Vector p(2);
    p << lo[0] + h * static_cast<double>(k % static_cast<std::size_t>(nx)),
        lo[1] + h * static_cast<double>(k / static_cast<std::size_t>(nx));
    return p;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> node_weight(node_count, kInf);
  for (std::size_t k = 0; k < node_count; ++k) {
    const Vector p = node_point(k);
    if (contains(dom, p, opts.margin)) node_weight[k] = w(p);
  }

  struct Offset {
    int dx, dy;
    double len;
  };
  std::vector<Offset> offsets;
  for (int dx = -opts.stencil; dx <= opts.stencil; ++dx) {
    for (int dy = -opts.stencil; dy <= opts.stencil; ++dy) {
      if ((dx == 0 && dy == 0) || std::gcd(dx, dy) != 1) continue;
      offsets.push_back({dx, dy, h * std::hypot(dx, dy)});
    }
  }

  // straight edges between an endpoint and grid nodes within this radius
  const double join_radius = (opts.stencil + 1) * h;
  auto nearby = [&](const Vector& p) {
    std::vector<std::pair<std::size_t, double>> out;
    const double wp = w(p);
    const int ci = static_cast<int>(std::floor((p[0] - lo[0]) / h));
    const int cj = static_cast<int>(std::floor((p[1] - lo[1]) / h));
    const int reach = opts.stencil + 2;
    for (int j = cj - reach; j <= cj + reach; ++j) {
      for (int i = ci - reach; i <= ci + reach; ++i) {
        if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
        const auto k = static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
        if (node_weight[k] == kInf) continue;
        const double len = (node_point(k) - p).norm();
        if (len <= join_radius) out.emplace_back(k, len * 0.5 * (wp + node_weight[k]));
      }
    }
    return out;
  };
  const auto sources = nearby(x);
  const auto sinks = nearby(y);
  if (sources.empty() || sinks.empty()) {
    throw InvalidArgument("grid oracle: endpoint not connectable at this resolution");
  }

  double best = kInf;
  if ((x - y).norm() <= join_radius) best = (x - y).norm() * 0.5 * (w(x) + w(y));
  std::vector<double> sink_cost(node_count, kInf);
  for (const auto& [k, c] : sinks) sink_cost[k] = std::min(sink_cost[k], c);

  std::vector<double> dist(node_count, kInf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (const auto& [k, c] : sources) {
    if (c < dist[k]) {
      dist[k] = c;
      queue.emplace(c, k);
    }
  }
  while (!queue.empty()) {
    const auto [d, k] = queue.top();
    queue.pop();
    if (d > dist[k]) continue;
    if (d >= best) break;
    if (sink_cost[k] < kInf) best = std::min(best, d + sink_cost[k]);
    const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
    const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
    for (const Offset& o : offsets) {
      const int ii = i + o.dx;
      const int jj = j + o.dy;
      if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
      const auto kk = static_cast<std::size_t>(jj) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ii);
      if (node_weight[kk] == kInf) continue;
      const double nd = d + o.len * 0.5 * (node_weight[k] + node_weight[kk]);
      if (nd < dist[kk]) {
        dist[kk] = nd;
        queue.emplace(nd, kk);
      }
    }
  }
  if (best == kInf) throw InvalidArgument("grid oracle: endpoints not connected on the grid");
  return best;
}

// ---------------------------------------------------------------------------

LimRatioTable lim_ratio_check(const Vector& x, const Weight& w, const std::vector<double>& radii,
                              const GeodesicConfig& cfg, std::size_t directions) {
  if (radii.empty()) throw InvalidArgument("lim_ratio_check: no radii");
  if (directions == 0) throw InvalidArgument("lim_ratio_check: no directions");
  if (!contains(w.domain(), x, cfg.margin)) throw DomainError("lim_ratio_check: point outside the domain");
  LimRatioTable table;
  table.point = x;
  table.weight_at_point = w(x);
  const auto dirs = quasi_uniform_directions(x.size(), directions, 0);
  for (const double r : radii) {
    if (!(r > 0.0)) throw InvalidArgument("lim_ratio_check: radii must be positive");
    LimRatioRow row;
    row.radius = r;
    row.min_ratio = std::numeric_limits<double>::infinity();
    row.max_ratio = -row.min_ratio;
    for (const Vector& u : dirs) {
      const Vector y = x + r * u;
      if (!contains(w.domain(), y, cfg.margin)) {
        std::ostringstream os;
        os << "lim_ratio_check: radius " << r << " escapes the domain";
        throw InvalidArgument(os.str());
      }
      const DistanceResult d = omega_distance(x, y, w, cfg);
      const double ratio = d.value / r;
      row.min_ratio = std::min(row.min_ratio, ratio);
      row.max_ratio = std::max(row.max_ratio, ratio);
      row.max_deviation = std::max(row.max_deviation, std::abs(ratio - table.weight_at_point));
      row.all_converged = row.all_converged && d.converged;
    }
    if (!table.rows.empty() && !(row.max_deviation < table.rows.back().max_deviation)) {
      table.deviations_shrinking = false;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace blochcert
