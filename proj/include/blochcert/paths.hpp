#pragma once

#include "blochcert/geometry.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace blochcert {

using ScalarField = std::function<double(const Vector&)>;

// ---------------------------------------------------------------------------
// Polyline
// ---------------------------------------------------------------------------

// A rectifiable path given by its vertices, parameterized by arclength fraction s in [0,1].
// Lengths are measured in the polyline's norm.
class Polyline {
 public:
  // Throws InvalidArgument for fewer than two points, mixed dimensions, non-finite
  // coordinates or consecutive duplicates.
  Polyline(std::vector<Vector> points, NormSpec norm = NormSpec::euclidean());

  const std::vector<Vector>& points() const noexcept { return points_; }
  const NormSpec& norm() const noexcept { return norm_; }
  Eigen::Index dim() const noexcept { return points_.front().size(); }
  double length() const noexcept { return cumulative_.back(); }

  // Point at arclength fraction s in [0,1].
  Vector at(double s) const;

 private:
  std::vector<Vector> points_;
  NormSpec norm_;
  std::vector<double> cumulative_;  // arclength up to each vertex
};

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

// Knots 0 = t_0 < ... < t_n = 1 with one tag per cell.
struct Partition {
  enum class Tag { left, midpoint, right };

  std::vector<double> knots;
  std::vector<double> tags;

  // Throws InvalidArgument unless knots are strictly increasing from 0 to 1 and every tag
  // lies in its cell.
  void validate() const;

  static Partition uniform(std::size_t cells, Tag tag = Tag::midpoint);
};

// Two-point polyline [x, y]. Throws InvalidArgument if x == y.
Polyline segment(const Vector& x, const Vector& y, NormSpec n = NormSpec::euclidean());

double length(const Polyline& p);

// Sub-path over [c, d] in arclength fraction. Throws InvalidArgument unless 0 <= c < d <= 1.
Polyline restrict(const Polyline& p, double c, double d);

// sum_i f(gamma(s_i)) * l(gamma restricted to [t_{i-1}, t_i]).
double riemann_sum(const ScalarField& f, const Polyline& p, const Partition& part);

// Path integral by uniform dyadic refinement with midpoint tags until successive sums differ
// by less than tol. Throws NonConvergenceError past 2^20 cells.
double integrate(const ScalarField& f, const Polyline& p, double tol);

// ||x - y|| * int_0^1 f((1-t)x + t y) dt by adaptive Simpson quadrature to absolute tol.
double integrate_segment(const ScalarField& f, const Vector& x, const Vector& y, double tol,
                         NormSpec n = NormSpec::euclidean());

// ---------------------------------------------------------------------------
// CSV: header "# dim=<m> norm=<label>", then one comma-separated point per line.
// ---------------------------------------------------------------------------

void write_polyline_csv(std::ostream& os, const Polyline& p);
Polyline read_polyline_csv(std::istream& is);

// "0.5,0" -> Vector
Vector parse_point(const std::string& text);

}  // namespace blochcert
