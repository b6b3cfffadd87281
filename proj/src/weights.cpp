#include "blochcert/weights.hpp"

#include "blochcert/errors.hpp"
#include "blochcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace blochcert {

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing_in_norm:
      return "increasing_in_norm";
    case Monotonicity::decreasing_in_norm:
      return "decreasing_in_norm";
    case Monotonicity::none:
      return "none";
  }
  return "none";
}

Weight::Weight(Evaluator eval, Monotonicity monotonicity, ConvexDomain domain, std::string label)
    : eval_(std::move(eval)), monotonicity_(monotonicity), domain_(std::move(domain)), label_(std::move(label)) {}

double Weight::operator()(const Vector& x) const {
  if (!contains(domain_, x, 0.0)) {
    std::ostringstream os;
    os << "weight '" << label_ << "' evaluated outside its domain " << domain_.label();
    throw DomainError(os.str());
  }
  const double v = eval_(x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError("weight '" + label_ + "' produced a non-positive or non-finite value");
  }
  return v;
}

double evaluate(const Weight& w, const Vector& x) { return w(x); }

Weight Weight::constant_one() {
  Weight w([](const Vector&) { return 1.0; }, Monotonicity::none, ConvexDomain::whole_space(), "const1");
  w.constant_one_ = true;
  return w;
}

Weight Weight::hyperbolic() {
  Weight w([](const Vector& x) { return 1.0 / (1.0 - x.squaredNorm()); }, Monotonicity::increasing_in_norm,
           ConvexDomain::unit_ball(), "hyperbolic");
  w.closed_form_ = DistanceFn(hyperbolic_distance);
  return w;
}

Weight Weight::spherical() {
  Weight w([](const Vector& z) { return 1.0 / (1.0 + z.squaredNorm()); }, Monotonicity::decreasing_in_norm,
           ConvexDomain::whole_space(), "spherical");
  w.closed_form_ = DistanceFn(spherical_geodesic_distance);
  return w;
}

Weight Weight::phi_prime(const OMFunction& phi) {
  const auto mono = is_derivative_increasing(phi, 1.0, 1000);
  return Weight([phi](const Vector& x) { return om_derivative(phi, x.norm()); },
                mono.increasing ? Monotonicity::increasing_in_norm : Monotonicity::none, ConvexDomain::unit_ball(),
                "phi_prime:" + phi.spec());
}

Weight Weight::scaled(const Weight& w, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("weight scale must be positive");
  std::ostringstream label;
  label.precision(17);
  label << "scale:" << c << ":" << w.label();
  Weight out([inner = w.eval_, c](const Vector& x) { return c * inner(x); }, w.monotonicity_, w.domain_, label.str());
  if (w.closed_form_) {
    out.closed_form_ = [inner = *w.closed_form_, c](const Vector& x, const Vector& y) { return c * inner(x, y); };
  }
  return out;
}

Weight Weight::parse(const std::string& spec) {
  if (spec == "const1") return constant_one();
  if (spec == "hyperbolic") return hyperbolic();
  if (spec == "spherical") return spherical();
  if (spec.rfind("phi_prime:", 0) == 0) return phi_prime(OMFunction::parse(spec.substr(10)));
  if (spec.rfind("scale:", 0) == 0) {
    const auto colon = spec.find(':', 6);
    if (colon != std::string::npos) {
      double c = 0.0;
      try {
        c = std::stod(spec.substr(6, colon - 6));
      } catch (const std::logic_error&) {
        throw InvalidArgument("weight spec: bad scale in '" + spec + "'");
      }
      return scaled(parse(spec.substr(colon + 1)), c);
    }
  }
  throw InvalidArgument("unknown weight spec '" + spec + "'");
}

double hyperbolic_distance(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "hyperbolic_distance");
  const double ax = 1.0 - x.squaredNorm();
  const double ay = 1.0 - y.squaredNorm();
  if (!(ax > 0.0) || !(ay > 0.0)) throw DomainError("hyperbolic_distance: point outside the open unit ball");
  return std::asinh((x - y).norm() / (std::sqrt(ax) * std::sqrt(ay)));
}

double spherical_distance(const Vector& z, const Vector& w) {
  require_same_dim(z, w, "spherical_distance");
  return (z - w).norm() / (std::sqrt(1.0 + z.squaredNorm()) * std::sqrt(1.0 + w.squaredNorm()));
}

double spherical_geodesic_distance(const Vector& z, const Vector& w) {
  require_same_dim(z, w, "spherical_geodesic_distance");
  // |1 + conj(z) w| generalized to R^m
  const double c = 1.0 + 2.0 * z.dot(w) + z.squaredNorm() * w.squaredNorm();
  return std::atan2((z - w).norm(), std::sqrt(std::max(0.0, c)));
}

MonotonicityCheck validate_monotonicity(const Weight& w, Eigen::Index dim, std::size_t pairs, std::uint64_t seed,
                                        double margin) {
  MonotonicityCheck out;
  if (w.monotonicity() == Monotonicity::none) return out;
  const auto dirs = quasi_uniform_directions(dim, pairs, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Vector& u : dirs) {
    const double reach = std::min(w.domain().ray_exit(u, margin), 1e3);
    double r1 = reach * unit(rng);
    double r2 = reach * unit(rng);
    if (r1 > r2) std::swap(r1, r2);
    if (r1 == r2) continue;
    const double w1 = w(r1 * u);
    const double w2 = w(r2 * u);
    ++out.pairs_checked;
    const bool ok = w.monotonicity() == Monotonicity::increasing_in_norm ? w1 <= w2 : w1 >= w2;
    if (!ok) {
      out.holds = false;
      out.witness_radii = std::pair{r1, r2};
      out.witness_direction = u;
      break;
    }
  }
  return out;
}

}  // namespace blochcert
