#pragma once

#include "blochcert/paths.hpp"
#include "blochcert/weights.hpp"

#include <vector>

namespace blochcert {

struct GeodesicConfig {
  int control_points = 33;
  int max_iters = 2000;         // descent sweeps
  double step = 0.05;           // initial coordinate step, capped by the chord spacing
  double shrink = 0.5;          // backtracking factor
  double tol = 1e-7;            // stop when one sweep lowers the omega-length by less
  double margin = kDefaultMargin;
  double integrate_tol = 1e-8;  // quadrature tolerance for the reported omega-length

  void validate() const;
};

struct DistanceResult {
  double value = 0.0;  // omega-length of `path`; an upper bound on d_omega
  Polyline path;
  static constexpr const char* bound = "upper";
  int iterations = 0;
  bool converged = false;
  // omega-length after initialization and after every sweep; non-increasing
  std::vector<double> history;
};

// int_gamma omega via integrate(). Throws DomainError if the path leaves the weight's domain.
double omega_length(const Polyline& p, const Weight& w, double tol);

// Upper bound on inf over paths of the omega-length, by coordinate-wise projected descent on
// the interior control points of a polyline initialized as the straight chord.
DistanceResult omega_distance(const Vector& x, const Vector& y, const Weight& w, const GeodesicConfig& cfg = {},
                              NormSpec n = NormSpec::euclidean());

struct GridOracleOptions {
  // Offsets (dx, dy) with max(|dx|,|dy|) <= stencil and gcd 1. stencil = 1 is the
  // 8-neighborhood.
  int stencil = 3;
  double margin = kDefaultMargin;
};

// Shortest path on a regular 2D grid over the domain's bounding box with edge cost
// length * mean endpoint weight. x and y join the grid through straight edges to nearby
// nodes. Throws InvalidArgument for dim != 2 and when x or y cannot be connected.
double omega_distance_grid_oracle(const Vector& x, const Vector& y, const Weight& w, int resolution,
                                  const GridOracleOptions& opts = {});

struct LimRatioRow {
  double radius = 0.0;
  double max_deviation = 0.0;  // max over directions of |d_omega(x, x+r u)/r - omega(x)|
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool all_converged = true;
};

struct LimRatioTable {
  Vector point;
  double weight_at_point = 0.0;
  std::vector<LimRatioRow> rows;
  bool deviations_shrinking = true;  // max_deviation strictly decreasing along rows
};

// Ratio d_omega(x, x + r u) / r against omega(x) over `directions` quasi-uniform unit vectors
// per radius. Throws InvalidArgument if some x + r u leaves the domain.
LimRatioTable lim_ratio_check(const Vector& x, const Weight& w, const std::vector<double>& radii,
                              const GeodesicConfig& cfg = {}, std::size_t directions = 16);

}  // namespace blochcert
