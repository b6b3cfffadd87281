#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <variant>

namespace blochcert {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultMargin = 1e-6;

// ---------------------------------------------------------------------------
// NormSpec
// ---------------------------------------------------------------------------

struct NormSpec {
  enum class Kind { euclidean, p_norm, max_norm };

  Kind kind = Kind::euclidean;
  double p = 2.0;  // only meaningful for p_norm

  static NormSpec euclidean() { return {Kind::euclidean, 2.0}; }
  static NormSpec max_norm() { return {Kind::max_norm, 0.0}; }
  static NormSpec p_norm(double p);  // throws InvalidArgument unless p >= 1

  // "euclidean", "max" or "p:<p>"
  std::string label() const;
  static NormSpec parse(const std::string& text);

  bool operator==(const NormSpec& other) const = default;
};

// ||v|| for the selected norm. Throws InvalidArgument on non-finite coordinates.
double norm(const Vector& v, const NormSpec& n);

// ||x - y||; throws InvalidArgument when dimensions differ.
double distance(const Vector& x, const Vector& y, const NormSpec& n);

void require_same_dim(const Vector& x, const Vector& y, const char* what);
void require_finite(const Vector& x, const char* what);

// ---------------------------------------------------------------------------
// ConvexDomain
// ---------------------------------------------------------------------------

struct UnitBall {
  NormSpec norm = NormSpec::euclidean();
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

struct Box {
  Vector lo;
  Vector hi;
};

// All of R^m. Used by weights such as the spherical one that live on the whole plane.
struct WholeSpace {};

// Open convex set. Unit balls and the whole space are dimension-agnostic; balls and boxes
// fix their dimension through their data.
class ConvexDomain {
 public:
  using Shape = std::variant<UnitBall, Ball, Box, WholeSpace>;

  static ConvexDomain unit_ball(NormSpec n = NormSpec::euclidean());
  static ConvexDomain ball(Vector center, double radius);
  static ConvexDomain box(Vector lo, Vector hi);
  static ConvexDomain whole_space();

  const Shape& shape() const noexcept { return shape_; }
  bool bounded() const noexcept { return !std::holds_alternative<WholeSpace>(shape_); }
  std::string label() const;

  // Largest margin m such that the m-shrunk domain is nonempty.
  double inradius() const;

  // Signed depth of x: r - ||x - c|| for balls (in the ball's norm), distance to the nearest
  // face for boxes, +inf for the whole space. contains(x, m) <=> depth(x) > m.
  double depth(const Vector& x) const;

  // Center used for radial sampling.
  Vector center(Eigen::Index dim) const;

  // Axis-aligned box enclosing the domain, for dimension dim.
  std::pair<Vector, Vector> bounding_box(Eigen::Index dim) const;

  // Largest t >= 0 with depth(c + t u) >= margin, where c = center(dim(u)).
  double ray_exit(const Vector& u, double margin) const;

 private:
  explicit ConvexDomain(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

// True iff x lies in the domain shrunk by margin (strictly; the domain is open).
bool contains(const ConvexDomain& d, const Vector& x, double margin = 0.0);

// Euclidean projection onto the closed margin-shrunk domain (radial retraction for
// non-Euclidean unit balls). Idempotent. Throws InvalidArgument if margin >= inradius.
Vector project(const ConvexDomain& d, const Vector& x, double margin = 0.0);

}  // namespace blochcert
