#include "blochcert/derivatives.hpp"

#include "blochcert/errors.hpp"
#include "blochcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blochcert {

Vector MappingUnderTest::operator()(const Vector& x) const {
  if (x.size() != dim) throw InvalidArgument("mapping '" + label + "': dimension mismatch");
  if (!contains(domain, x, 0.0)) throw DomainError("mapping '" + label + "' evaluated outside its domain");
  Vector v = evaluate(x);
  if (v.size() != codomain_dim || !v.allFinite()) {
    throw DomainError("mapping '" + label + "' returned a malformed or non-finite value");
  }
  return v;
}

void DerivativeConfig::validate(Eigen::Index dim) const {
  if (!(fd_step > 0.0)) throw InvalidArgument("DerivativeConfig: fd_step must be positive");
  if (radii_levels < 1) throw InvalidArgument("DerivativeConfig: radii_levels must be >= 1");
  if (directions < 2 * dim) throw InvalidArgument("DerivativeConfig: directions must be >= 2 * dim");
}

Matrix jacobian_central_difference(const MappingUnderTest& f, const Vector& x, double step) {
  Matrix J(f.codomain_dim, f.dim);
  for (Eigen::Index i = 0; i < f.dim; ++i) {
    Vector xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return J;
}

Matrix jacobian_at(const MappingUnderTest& f, const Vector& x, const DerivativeConfig& cfg) {
  if (f.jacobian) {
    if (!contains(f.domain, x, 0.0)) throw DomainError("jacobian_at: point outside the domain");
    Matrix J = (*f.jacobian)(x);
    if (J.rows() != f.codomain_dim || J.cols() != f.dim) throw InvalidArgument("jacobian has the wrong shape");
    return J;
  }
  return jacobian_central_difference(f, x, cfg.fd_step);
}

namespace {

double top_eigenvalue_power(const Matrix& A) {
  constexpr int kMaxSteps = 10000;
  const Eigen::Index n = A.rows();
  std::vector<Vector> starts{Vector::Ones(n)};
  for (Eigen::Index i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));
  double best = 0.0;
  for (Vector v : starts) {
    v.normalize();
    double lambda = v.dot(A * v);
    double previous = lambda;
    bool done = false;
    for (int step = 0; step < kMaxSteps; ++step) {
      Vector w = A * v;
      const double wn = w.norm();
      if (wn == 0.0) {
        lambda = 0.0;
        done = true;
        break;
      }
      v = w / wn;
      lambda = v.dot(A * v);
      if (std::abs(lambda - previous) <= 1e-14 * std::abs(lambda)) {
        done = true;
        break;
      }
      previous = lambda;
    }
    if (!done) throw NonConvergenceError("operator_norm: power iteration did not converge", previous, lambda);
    best = std::max(best, lambda);
  }
  return best;
}

}  // namespace

double operator_norm(const Matrix& J, const NormSpec& domain_norm, const NormSpec& codomain_norm,
                     const DerivativeConfig& cfg) {
  if (!J.allFinite()) throw InvalidArgument("operator_norm: non-finite matrix");
  if (J.size() == 0 || J.isZero(0.0)) return 0.0;
  if (domain_norm.kind == NormSpec::Kind::euclidean && codomain_norm.kind == NormSpec::Kind::euclidean) {
    return std::sqrt(std::max(0.0, top_eigenvalue_power(J.transpose() * J)));
  }
  return operator_norm_sampled(J, domain_norm, codomain_norm, cfg);
}

double operator_norm_sampled(const Matrix& J, const NormSpec& domain_norm, const NormSpec& codomain_norm,
                             const DerivativeConfig& cfg) {
  const Eigen::Index n = J.cols();
  auto value = [&](const Vector& zeta) { return norm(J * zeta, codomain_norm); };
  auto unit = [&](const Vector& u) -> Vector { return u / norm(u, domain_norm); };

  const auto count = static_cast<std::size_t>(std::max<Eigen::Index>(cfg.directions, 2 * n));
  std::vector<std::pair<double, Vector>> scored;
  for (const Vector& u : quasi_uniform_directions(n, count, cfg.seed)) {
    Vector z = unit(u);
    scored.emplace_back(value(z), std::move(z));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  scored.resize(std::min<std::size_t>(scored.size(), 4));

  double best = 0.0;
  for (auto& [v, z] : scored) {
    double step = 0.1;
    while (step > 1e-12) {
      bool improved = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (const double sign : {1.0, -1.0}) {
          Vector cand = z;
          cand[i] += sign * step;
          if (cand.isZero(0.0)) continue;
          cand = unit(cand);
          const double cv = value(cand);
          if (cv > v) {
            v = cv;
            z = std::move(cand);
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, v);
  }
  return best;
}

UpperDerivative upper_derivative(const MappingUnderTest& f, const Vector& x, const DerivativeConfig& cfg) {
  cfg.validate(f.dim);
  const double smallest = cfg.fd_step * std::ldexp(1.0, -cfg.radii_levels);
  if (!(f.domain.depth(x) > smallest)) {
    std::ostringstream os;
    os << "upper_derivative: point closer to the boundary than the smallest radius " << smallest;
    throw DomainError(os.str());
  }
  const Vector fx = f(x);
  std::vector<Vector> dirs;
  for (const Vector& u : quasi_uniform_directions(f.dim, static_cast<std::size_t>(cfg.directions), cfg.seed)) {
    dirs.push_back(u / norm(u, f.domain_norm));
  }

  UpperDerivative out;
  for (int k = 0; k <= cfg.radii_levels; ++k) {
    const double r = cfg.fd_step * std::ldexp(1.0, -k);
    double level_max = 0.0;
    for (const Vector& u : dirs) {
      double rr = r;
      Vector y = x + rr * u;
      for (int shrink = 0; shrink < 64 && !contains(f.domain, y, 0.0); ++shrink) {
        rr *= 0.5;
        y = x + rr * u;
      }
      const double dx = norm(y - x, f.domain_norm);
      if (dx == 0.0) continue;
      level_max = std::max(level_max, norm(f(y) - fx, f.codomain_norm) / dx);
    }
    out.radii.push_back(r);
    out.per_level.push_back(level_max);
  }
  const std::size_t L = out.per_level.size();
  out.sampled = std::max(out.per_level[L - 1], out.per_level[L - 2]);
  out.value = out.sampled;
  if (f.jacobian) {
    out.differential_norm = operator_norm((*f.jacobian)(x), f.domain_norm, f.codomain_norm, cfg);
    out.value = std::max(out.value, *out.differential_norm);
  }
  return out;
}

}  // namespace blochcert
