#include "blochcert/paths.hpp"

#include "blochcert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace blochcert {

Polyline::Polyline(std::vector<Vector> points, NormSpec norm)
    : points_(std::move(points)), norm_(norm) {
  if (points_.size() < 2) throw InvalidArgument("polyline needs at least two points");
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require_finite(points_[i], "polyline point");
    if (i == 0) continue;
    require_same_dim(points_[i - 1], points_[i], "polyline");
    const double gap = distance(points_[i - 1], points_[i], norm_);
    if (gap == 0.0) throw InvalidArgument("polyline has consecutive duplicate points");
    cumulative_.push_back(cumulative_.back() + gap);
  }
}

Vector Polyline::at(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("Polyline::at: s outside [0,1]");
  if (s == 0.0) return points_.front();
  if (s == 1.0) return points_.back();
  const double target = s * length();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t k = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  k = std::clamp<std::size_t>(k, 1, points_.size() - 1) - 1;
  const double seg = cumulative_[k + 1] - cumulative_[k];
  const double lambda = std::clamp((target - cumulative_[k]) / seg, 0.0, 1.0);
  return points_[k] + lambda * (points_[k + 1] - points_[k]);
}

void Partition::validate() const {
  if (knots.size() < 2) throw InvalidArgument("partition needs at least one cell");
  if (knots.front() != 0.0 || knots.back() != 1.0) throw InvalidArgument("partition must span [0,1]");
  if (tags.size() + 1 != knots.size()) throw InvalidArgument("partition needs one tag per cell");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) throw InvalidArgument("partition knots must be strictly increasing");
    if (!(tags[i - 1] >= knots[i - 1] && tags[i - 1] <= knots[i])) {
      throw InvalidArgument("partition tag outside its cell");
    }
  }
}

Partition Partition::uniform(std::size_t cells, Tag tag) {
  if (cells == 0) throw InvalidArgument("partition needs at least one cell");
  Partition p;
  p.knots.resize(cells + 1);
  p.tags.resize(cells);
  const double n = static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) p.knots[i] = static_cast<double>(i) / n;
  p.knots.back() = 1.0;
  for (std::size_t i = 0; i < cells; ++i) {
    switch (tag) {
      case Tag::left:
        p.tags[i] = p.knots[i];
        break;
      case Tag::midpoint:
        p.tags[i] = (static_cast<double>(i) + 0.5) / n;
        break;
      case Tag::right:
        p.tags[i] = p.knots[i + 1];
        break;
    }
  }
  return p;
}

Polyline segment(const Vector& x, const Vector& y, NormSpec n) {
  require_same_dim(x, y, "segment");
  if (x == y) throw InvalidArgument("segment: endpoints coincide");
  return Polyline({x, y}, n);
}

double length(const Polyline& p) { return p.length(); }

Polyline restrict(const Polyline& p, double c, double d) {
  if (!(c >= 0.0 && c < d && d <= 1.0)) throw InvalidArgument("restrict requires 0 <= c < d <= 1");
  if (c == 0.0 && d == 1.0) return p;
  const auto& pts = p.points();
  const double total = p.length();
  std::vector<Vector> out;
  out.push_back(p.at(c));
  double cum = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    cum += distance(pts[i - 1], pts[i], p.norm());
    const double s = cum / total;
    if (s > c && s < d && pts[i] != out.back()) out.push_back(pts[i]);
  }
  Vector end = p.at(d);
  if (end != out.back()) out.push_back(std::move(end));
  if (out.size() < 2) throw InvalidArgument("restrict: sub-path degenerates to a point");
  return Polyline(std::move(out), p.norm());
}

double riemann_sum(const ScalarField& f, const Polyline& p, const Partition& part) {
  part.validate();
  // arclength parameterization: the sub-path over a cell has length (t_i - t_{i-1}) * L
  const double total = p.length();
  double sum = 0.0;
  for (std::size_t i = 0; i < part.tags.size(); ++i) {
    const double v = f(p.at(part.tags[i]));
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "riemann_sum: non-finite integrand at tag " << part.tags[i];
      throw DomainError(os.str());
    }
    sum += v * (part.knots[i + 1] - part.knots[i]) * total;
  }
  return sum;
}

double integrate(const ScalarField& f, const Polyline& p, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("integrate: tol must be positive");
  constexpr std::size_t kFirst = 16;
  constexpr std::size_t kCap = std::size_t{1} << 20;
  double previous = riemann_sum(f, p, Partition::uniform(kFirst));
  for (std::size_t cells = 2 * kFirst; cells <= kCap; cells *= 2) {
    const double current = riemann_sum(f, p, Partition::uniform(cells));
    if (std::abs(current - previous) < tol) return current;
    previous = current;
    if (cells == kCap) {
      throw NonConvergenceError("integrate: refinement cap of 2^20 cells reached", previous, current);
    }
  }
  return previous;
}

namespace {

struct SimpsonPanel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double b, double fb, double fm) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive_simpson(const std::function<double(double)>& g, const SimpsonPanel& p, double tol, int depth,
                        bool& capped) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = simpson(p.a, p.fa, p.m, p.fm, flm);
  const double right = simpson(p.m, p.fm, p.b, p.fb, frm);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    capped = true;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(g, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1, capped) +
         adaptive_simpson(g, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1, capped);
}

}  // namespace

double integrate_segment(const ScalarField& f, const Vector& x, const Vector& y, double tol, NormSpec n) {
  if (!(tol > 0.0)) throw InvalidArgument("integrate_segment: tol must be positive");
  require_same_dim(x, y, "integrate_segment");
  const double len = distance(x, y, n);
  if (len == 0.0) return 0.0;
  const Vector dir = y - x;
  auto g = [&](double t) {
    const double v = f(x + t * dir);
    if (!std::isfinite(v)) throw DomainError("integrate_segment: non-finite integrand");
    return v;
  };
  // a few fixed panels first so symmetric integrands cannot fake early agreement
  constexpr int kPanels = 4;
  const double inner_tol = tol / len / kPanels;
  bool capped = false;
  double sum = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double a = static_cast<double>(k) / kPanels;
    const double b = static_cast<double>(k + 1) / kPanels;
    const double m = 0.5 * (a + b);
    const double fa = g(a), fm = g(m), fb = g(b);
    sum += adaptive_simpson(g, {a, fa, m, fm, b, fb, simpson(a, fa, b, fb, fm)}, inner_tol, 40, capped);
  }
  if (capped) throw NonConvergenceError("integrate_segment: recursion depth exhausted", sum * len, sum * len);
  return sum * len;
}

// ---------------------------------------------------------------------------

void write_polyline_csv(std::ostream& os, const Polyline& p) {
  os << "# dim=" << p.dim() << " norm=" << p.norm().label() << "\n";
  os << std::setprecision(17);
  for (const Vector& v : p.points()) {
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "\n";
  }
}

Vector parse_point(const std::string& text) {
  std::vector<double> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      coords.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw InvalidArgument("bad coordinate '" + item + "'");
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad coordinate '" + item + "' in point '" + text + "'");
    }
  }
  if (coords.empty()) throw InvalidArgument("empty point");
  return Eigen::Map<Vector>(coords.data(), static_cast<Eigen::Index>(coords.size()));
}

Polyline read_polyline_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("polyline csv: missing header");
  Eigen::Index dim = 0;
  NormSpec n = NormSpec::euclidean();
  {
    std::istringstream hs(line);
    std::string hash, dim_field, norm_field;
    hs >> hash >> dim_field >> norm_field;
    if (hash != "#" || dim_field.rfind("dim=", 0) != 0 || norm_field.rfind("norm=", 0) != 0) {
      throw InvalidArgument("polyline csv: header must read '# dim=<m> norm=<kind>'");
    }
    dim = std::stol(dim_field.substr(4));
    n = NormSpec::parse(norm_field.substr(5));
  }
  std::vector<Vector> pts;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Vector v = parse_point(line);
    if (v.size() != dim) throw InvalidArgument("polyline csv: point dimension differs from header");
    pts.push_back(std::move(v));
  }
  return Polyline(std::move(pts), n);
}

}  // namespace blochcert
