#pragma once

#include "blochcert/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace blochcert {

// A mapping f: Omega -> Y with an optional exact Jacobian (codomain_dim x dim).
struct MappingUnderTest {
  ConvexDomain domain = ConvexDomain::unit_ball();
  Eigen::Index dim = 2;
  NormSpec domain_norm = NormSpec::euclidean();
  Eigen::Index codomain_dim = 2;
  NormSpec codomain_norm = NormSpec::euclidean();
  std::function<Vector(const Vector&)> evaluate;
  std::optional<std::function<Matrix(const Vector&)>> jacobian;
  std::string label;

  // Evaluates f(x); throws DomainError outside the open domain.
  Vector operator()(const Vector& x) const;
};

struct DerivativeConfig {
  double fd_step = 1e-4;  // h0
  int radii_levels = 6;   // radii h0 * 2^-k, k = 0..radii_levels
  int directions = 64;
  std::uint64_t seed = 42;

  void validate(Eigen::Index dim) const;
};

// Exact Jacobian when supplied, otherwise central differences with step fd_step.
Matrix jacobian_at(const MappingUnderTest& f, const Vector& x, const DerivativeConfig& cfg = {});

// Same as jacobian_at but always by central differences.
Matrix jacobian_central_difference(const MappingUnderTest& f, const Vector& x, double step);

// sup over the domain unit sphere of ||J zeta||. Euclidean->Euclidean: largest singular value
// by power iteration on J^T J. Other norm pairs: operator_norm_sampled (a lower bound).
double operator_norm(const Matrix& J, const NormSpec& domain_norm, const NormSpec& codomain_norm,
                     const DerivativeConfig& cfg = {});

// Max of ||J zeta|| over quasi-uniform unit vectors (normalized in the domain norm), polished
// by local hill climbing. Never exceeds the true operator norm.
double operator_norm_sampled(const Matrix& J, const NormSpec& domain_norm, const NormSpec& codomain_norm,
                             const DerivativeConfig& cfg = {});

struct UpperDerivative {
  double value = 0.0;               // reported estimate of d*_f(x)
  double sampled = 0.0;             // max ratio over the two smallest radius levels
  std::optional<double> differential_norm;  // ||d_f(x)|| when a Jacobian is available
  std::vector<double> radii;
  std::vector<double> per_level;    // max ratio per radius level
};

// Lower-bound estimate of limsup_{y->x} ||f(x)-f(y)|| / ||x-y|| from sampled difference
// quotients; with an exact Jacobian, value = max(sampled, operator norm of the Jacobian).
// Samples leaving the domain are pulled in by halving their radius; throws DomainError when
// x lies closer to the boundary than the smallest radius.
UpperDerivative upper_derivative(const MappingUnderTest& f, const Vector& x, const DerivativeConfig& cfg = {});

}  // namespace blochcert
