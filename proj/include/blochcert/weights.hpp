#pragma once

#include "blochcert/geometry.hpp"
#include "blochcert/operator_monotone.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace blochcert {

enum class Monotonicity { increasing_in_norm, decreasing_in_norm, none };

std::string to_string(Monotonicity m);

// Strictly positive continuous scalar field on an open convex domain.
class Weight {
 public:
  using Evaluator = std::function<double(const Vector&)>;
  // Exact omega-distance, when one is known in closed form.
  using DistanceFn = std::function<double(const Vector&, const Vector&)>;

  Weight(Evaluator eval, Monotonicity monotonicity, ConvexDomain domain, std::string label);

  // Throws DomainError when x lies outside the open domain or the value is not finite
  // and positive. Never clips.
  double operator()(const Vector& x) const;

  Monotonicity monotonicity() const noexcept { return monotonicity_; }
  const ConvexDomain& domain() const noexcept { return domain_; }
  const std::string& label() const noexcept { return label_; }

  bool is_constant_one() const noexcept { return constant_one_; }
  const std::optional<DistanceFn>& closed_form_distance() const noexcept { return closed_form_; }

  static Weight constant_one();
  // (1 - |x|^2)^-1 on the Euclidean unit ball, with the hyperbolic distance attached.
  static Weight hyperbolic();
  // (1 + |z|^2)^-1 on the whole plane, with spherical_geodesic_distance attached.
  static Weight spherical();
  // phi'(|x|) on the Euclidean unit ball; monotonicity from the derivative grid check.
  static Weight phi_prime(const OMFunction& phi);
  // c * w, c > 0. Keeps monotonicity; scales any closed-form distance.
  static Weight scaled(const Weight& w, double c);

  // "const1 | hyperbolic | spherical | phi_prime:<om-spec>", optionally prefixed by
  // "scale:<c>:".
  static Weight parse(const std::string& spec);

 private:
  Evaluator eval_;
  Monotonicity monotonicity_;
  ConvexDomain domain_;
  std::string label_;
  bool constant_one_ = false;
  std::optional<DistanceFn> closed_form_;
};

double evaluate(const Weight& w, const Vector& x);

// asinh(|x - y| / (sqrt(1 - |x|^2) sqrt(1 - |y|^2))). Throws DomainError unless both points
// lie in the open Euclidean unit ball.
double hyperbolic_distance(const Vector& x, const Vector& y);

// |z - w| / (sqrt(1 + |z|^2) sqrt(1 + |w|^2)), the chordal distance. It is the sine of
// spherical_geodesic_distance, so it never exceeds it.
double spherical_distance(const Vector& z, const Vector& w);

// Exact omega-distance of the spherical weight: atan2(|z - w|, |1 + <z, w>|) in the complex
// sense, extended to R^m. Equals asin of the chordal distance.
double spherical_geodesic_distance(const Vector& z, const Vector& w);

struct MonotonicityCheck {
  bool holds = true;
  std::size_t pairs_checked = 0;
  // radii (r1 < r2) and direction index of the first violation
  std::optional<std::pair<double, double>> witness_radii;
  Vector witness_direction;
};

// Samples radial pairs r1 < r2 along quasi-uniform directions from the origin and checks the
// declared monotonicity. A weight declared `none` always passes.
MonotonicityCheck validate_monotonicity(const Weight& w, Eigen::Index dim, std::size_t pairs,
                                        std::uint64_t seed, double margin = kDefaultMargin);

}  // namespace blochcert
