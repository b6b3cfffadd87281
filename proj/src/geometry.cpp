#include "blochcert/geometry.hpp"

#include "blochcert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blochcert {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

NormSpec NormSpec::p_norm(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("p-norm requires finite p >= 1");
  }
  return {Kind::p_norm, p};
}

std::string NormSpec::label() const {
  switch (kind) {
    case Kind::euclidean:
      return "euclidean";
    case Kind::max_norm:
      return "max";
    case Kind::p_norm: {
      std::ostringstream os;
      os.precision(17);
      os << "p:" << p;
      return os.str();
    }
  }
  return "euclidean";
}

NormSpec NormSpec::parse(const std::string& text) {
  if (text == "euclidean" || text == "l2") return euclidean();
  if (text == "max" || text == "max_norm" || text == "linf") return max_norm();
  if (text.rfind("p:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double p = std::stod(text.substr(2), &used);
      if (used + 2 == text.size()) return p_norm(p);
    } catch (const std::logic_error&) {
    }
  }
  throw InvalidArgument("unknown norm spec '" + text + "'");
}

void require_same_dim(const Vector& x, const Vector& y, const char* what) {
  if (x.size() != y.size()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << x.size() << " vs " << y.size() << ")";
    throw InvalidArgument(os.str());
  }
}

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite coordinate");
}

double norm(const Vector& v, const NormSpec& n) {
  require_finite(v, "norm");
  switch (n.kind) {
    case NormSpec::Kind::euclidean:
      return v.norm();
    case NormSpec::Kind::max_norm:
      return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    case NormSpec::Kind::p_norm: {
      if (v.size() == 0) return 0.0;
      // scale by the max coordinate so large p does not overflow
      const double scale = v.cwiseAbs().maxCoeff();
      if (scale == 0.0) return 0.0;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / scale, n.p);
      return scale * std::pow(acc, 1.0 / n.p);
    }
  }
  return v.norm();
}

double distance(const Vector& x, const Vector& y, const NormSpec& n) {
  require_same_dim(x, y, "distance");
  return norm(x - y, n);
}

// ---------------------------------------------------------------------------

ConvexDomain ConvexDomain::unit_ball(NormSpec n) { return ConvexDomain(UnitBall{n}); }

ConvexDomain ConvexDomain::ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball radius must be positive");
  require_finite(center, "ball center");
  return ConvexDomain(Ball{std::move(center), radius});
}

ConvexDomain ConvexDomain::box(Vector lo, Vector hi) {
  require_same_dim(lo, hi, "box");
  require_finite(lo, "box lo");
  require_finite(hi, "box hi");
  if (!(hi.array() > lo.array()).all()) throw InvalidArgument("box requires lo < hi in every coordinate");
  return ConvexDomain(Box{std::move(lo), std::move(hi)});
}

ConvexDomain ConvexDomain::whole_space() { return ConvexDomain(WholeSpace{}); }

std::string ConvexDomain::label() const {
  return std::visit(overloaded{
                        [](const UnitBall& b) { return "unit_ball(" + b.norm.label() + ")"; },
                        [](const Ball& b) {
                          std::ostringstream os;
                          os.precision(17);
                          os << "ball(center=(";
                          for (Eigen::Index i = 0; i < b.center.size(); ++i) {
                            os << (i ? "," : "") << b.center[i];
                          }
                          os << "),r=" << b.radius << ")";
                          return os.str();
                        },
                        [](const Box& b) { return "box(dim=" + std::to_string(b.lo.size()) + ")"; },
                        [](const WholeSpace&) { return std::string("whole_space"); },
                    },
                    shape_);
}

double ConvexDomain::inradius() const {
  return std::visit(overloaded{
                        [](const UnitBall&) { return 1.0; },
                        [](const Ball& b) { return b.radius; },
                        [](const Box& b) { return 0.5 * (b.hi - b.lo).minCoeff(); },
                        [](const WholeSpace&) { return kInf; },
                    },
                    shape_);
}

double ConvexDomain::depth(const Vector& x) const {
  return std::visit(overloaded{
                        [&](const UnitBall& b) { return 1.0 - norm(x, b.norm); },
                        [&](const Ball& b) { return b.radius - distance(x, b.center, NormSpec::euclidean()); },
                        [&](const Box& b) {
                          require_same_dim(x, b.lo, "box depth");
                          return std::min((x - b.lo).minCoeff(), (b.hi - x).minCoeff());
                        },
                        [&](const WholeSpace&) {
                          require_finite(x, "depth");
                          return kInf;
                        },
                    },
                    shape_);
}

Vector ConvexDomain::center(Eigen::Index dim) const {
  return std::visit(overloaded{
                        [&](const Ball& b) -> Vector { return b.center; },
                        [&](const Box& b) -> Vector { return 0.5 * (b.lo + b.hi); },
                        [&](const auto&) -> Vector { return Vector::Zero(dim); },
                    },
                    shape_);
}

std::pair<Vector, Vector> ConvexDomain::bounding_box(Eigen::Index dim) const {
  return std::visit(
      overloaded{
          // |x_i| <= ||x||_p for every p >= 1, so the unit cube encloses every unit ball
          [&](const UnitBall&) { return std::pair{Vector(Vector::Constant(dim, -1.0)), Vector(Vector::Constant(dim, 1.0))}; },
          [&](const Ball& b) {
            return std::pair{Vector(b.center.array() - b.radius), Vector(b.center.array() + b.radius)};
          },
          [&](const Box& b) { return std::pair{b.lo, b.hi}; },
          [&](const WholeSpace&) -> std::pair<Vector, Vector> {
            throw InvalidArgument("whole space has no bounding box");
          },
      },
      shape_);
}

double ConvexDomain::ray_exit(const Vector& u, double margin) const {
  if (u.isZero()) throw InvalidArgument("ray_exit: zero direction");
  return std::visit(overloaded{
                        [&](const UnitBall& b) { return (1.0 - margin) / norm(u, b.norm); },
                        [&](const Ball& b) { return (b.radius - margin) / u.norm(); },
                        [&](const Box& b) {
                          const Vector c = 0.5 * (b.lo + b.hi);
                          double t = kInf;
                          for (Eigen::Index i = 0; i < u.size(); ++i) {
                            if (u[i] > 0) t = std::min(t, (b.hi[i] - margin - c[i]) / u[i]);
                            if (u[i] < 0) t = std::min(t, (b.lo[i] + margin - c[i]) / u[i]);
                          }
                          return t;
                        },
                        [&](const WholeSpace&) { return kInf; },
                    },
                    shape_);
}

bool contains(const ConvexDomain& d, const Vector& x, double margin) {
  if (!x.allFinite()) return false;
  return d.depth(x) > margin;
}

Vector project(const ConvexDomain& d, const Vector& x, double margin) {
  if (!(margin >= 0.0) || margin >= d.inradius()) {
    throw InvalidArgument("project: margin must lie in [0, inradius)");
  }
  require_finite(x, "project");
  return std::visit(overloaded{
                        [&](const UnitBall& b) -> Vector {
                          const double r = 1.0 - margin;
                          const double nx = norm(x, b.norm);
                          if (nx <= r) return x;
                          if (b.norm.kind == NormSpec::Kind::max_norm) return x.cwiseMax(-r).cwiseMin(r);
                          return x * (r / nx);
                        },
                        [&](const Ball& b) -> Vector {
                          const double r = b.radius - margin;
                          const Vector off = x - b.center;
                          const double n = off.norm();
                          if (n <= r) return x;
                          return b.center + off * (r / n);
                        },
                        [&](const Box& b) -> Vector {
                          require_same_dim(x, b.lo, "project");
                          return x.array().max(b.lo.array() + margin).min(b.hi.array() - margin).matrix();
                        },
                        [&](const WholeSpace&) -> Vector { return x; },
                    },
                    d.shape());
}

}  // namespace blochcert
