#pragma once

#include "blochcert/derivatives.hpp"
#include "blochcert/omega_distance.hpp"
#include "blochcert/operator_monotone.hpp"
#include "blochcert/weights.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace blochcert {

// ---------------------------------------------------------------------------
// Admissible functions
// ---------------------------------------------------------------------------

// A pair of domain points together with their images, so that Psi_f and the Lipschitz ratio
// share one evaluation of f per point.
struct PairContext {
  const Vector& x;
  const Vector& y;
  const Vector& fx;
  const Vector& fy;
};

class AdmissibleFn {
 public:
  using Evaluator = std::function<double(const PairContext&)>;

  AdmissibleFn(Evaluator eval, std::string label, bool requires_mapping);

  double operator()(const PairContext& ctx) const { return eval_(ctx); }
  const std::string& label() const noexcept { return label_; }
  bool requires_mapping() const noexcept { return requires_mapping_; }

 private:
  Evaluator eval_;
  std::string label_;
  bool requires_mapping_;
};

// max(Psi(x,y), Psi(y,x))
AdmissibleFn symmetrize(const AdmissibleFn& psi);

// c * Psi; c != 1 breaks the diagonal condition and is used to probe the checker.
AdmissibleFn scale(const AdmissibleFn& psi, double c);

namespace admissible {

// (phi'(|x|) phi'(|y|))^(-1/2)
AdmissibleFn geometric_mean_phi(const OMFunction& phi, NormSpec n = NormSpec::euclidean());
// min(w~(f(x)), w~(f(y))) / max(w(x), w(y))
AdmissibleFn minmax(const Weight& omega, const Weight& co_omega);
// sqrt(1 - |x|^2) sqrt(1 - |y|^2)
AdmissibleFn hyperbolic();
// sqrt(1 - |x|^2) sqrt(1 - |y|^2) / (sqrt(1 + |f(x)|^2) sqrt(1 + |f(y)|^2))
AdmissibleFn spherical_normal();
// [d_w~(f(x),f(y)) / d(f(x),f(y))] / [d_w(x,y) / d(x,y)] with numerical omega-distances,
// w~(f(x)) / [d_w(x,y) / d(x,y)] when f(x) = f(y), and w~(f(x)) / w(x) on the diagonal.
AdmissibleFn ratio(const Weight& omega, const Weight& co_omega, const GeodesicConfig& cfg,
                   NormSpec domain_norm = NormSpec::euclidean(),
                   NormSpec codomain_norm = NormSpec::euclidean());

}  // namespace admissible

// Builds an admissible function from its CLI label:
//   hyperbolic | spherical_normal | minmax | ratio | geometric_mean_phi:<om-spec>
//   | sym:<label> | scale:<c>:<label>
AdmissibleFn parse_admissible(const std::string& label, const Weight& omega, const Weight& co_omega,
                              const GeodesicConfig& geo = {});

// ---------------------------------------------------------------------------
// Supremum estimation
// ---------------------------------------------------------------------------

struct SupremumConfig {
  std::size_t interior_samples = 4096;
  std::size_t pair_samples = 8192;
  int refine_rounds = 3;
  std::vector<double> shell_deltas{1e-2, 1e-3, 1e-4};
  std::uint64_t seed = 42;

  void validate() const;
};

struct BlochShell {
  double delta = 0.0;
  double value = 0.0;
  Vector argmax;
};

struct BlochEstimate {
  double value = 0.0;  // lower bound on the supremum: max over shells
  Vector argmax;
  std::vector<BlochShell> shells;  // sup over {depth >= delta}, in shell_deltas order
  std::size_t evaluations = 0;
};

struct LipschitzShell {
  double delta = 0.0;
  double value = 0.0;
  Vector x, y;
};

struct LipschitzEstimate {
  double value = 0.0;
  Vector x, y;
  std::vector<LipschitzShell> shells;
  std::size_t evaluations = 0;
  std::size_t skipped_degenerate = 0;  // pairs with ||x - y|| < 1e-12
};

// w~(f(x)) d*_f(x) / w(x). d*_f is the Jacobian's operator norm when f carries an exact
// Jacobian (the two agree at differentiability points), otherwise upper_derivative.
double bloch_integrand(const MappingUnderTest& f, const Weight& omega, const Weight& co_omega, const Vector& x,
                       const DerivativeConfig& dcfg = {});

// Psi(x,y) ||f(x) - f(y)|| / ||x - y||
double lipschitz_ratio(const MappingUnderTest& f, const AdmissibleFn& psi, const Vector& x, const Vector& y);

BlochEstimate bloch_number(const MappingUnderTest& f, const Weight& omega, const Weight& co_omega,
                           const SupremumConfig& cfg = {}, const DerivativeConfig& dcfg = {});

LipschitzEstimate lipschitz_number(const MappingUnderTest& f, const AdmissibleFn& psi, const SupremumConfig& cfg = {});

// ---------------------------------------------------------------------------
// Admissibility checking
// ---------------------------------------------------------------------------

enum class DistanceSource { automatic, closed_form, numerical };

struct AdmissibilityConfig {
  std::size_t pairs = 200;
  std::size_t limit_points = 32;  // base points for the liminf condition
  double margin = 0.05;           // sampled points keep this depth
  GeodesicConfig geo{};
  DistanceSource distances = DistanceSource::automatic;
  std::size_t max_witnesses = 5;
  std::uint64_t seed = 42;
};

struct Witness {
  Vector x, y;
  double slack = 0.0;  // negative means violated
};

struct ConditionReport {
  std::string name;
  bool pass = true;
  bool one_sided = false;  // passing is evidence, not proof
  std::size_t checked = 0;
  double worst_slack = 0.0;
  double threshold = 0.0;  // violated when slack < -threshold
  std::vector<Witness> witnesses;
};

struct AdmissibilityReport {
  std::vector<ConditionReport> conditions;  // (1), (2), (3), then (4') or (4)
  std::string distance_source;              // "closed_form" or "numerical"
  double budget = 0.0;                      // relative tolerance for (4)/(4')
  bool pass = true;
};

AdmissibilityReport check_admissible(const AdmissibleFn& psi, const MappingUnderTest& f, const Weight& omega,
                                     const Weight& co_omega, const AdmissibilityConfig& cfg = {});

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

struct EqualityCertificate {
  double bloch_estimate = 0.0;
  double lipschitz_estimate = 0.0;
  Vector argmax_point;
  Vector argmax_pair_x, argmax_pair_y;
  double relative_gap = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool admissibility_waived = false;
  std::optional<AdmissibilityReport> admissibility;
  BlochEstimate bloch;
  LipschitzEstimate lipschitz;
  SupremumConfig config;
  std::vector<std::string> failures;
  bool numerical_failure = false;  // some estimate threw NonConvergenceError or DomainError
};

struct CertifyOptions {
  double tolerance = 0.02;
  bool waive_admissibility = false;
  AdmissibilityConfig admissibility{.pairs = 64, .limit_points = 16};
  DerivativeConfig derivative{};
};

EqualityCertificate certify_equality(const MappingUnderTest& f, const Weight& omega, const Weight& co_omega,
                                     const AdmissibleFn& psi, const SupremumConfig& cfg = {},
                                     const CertifyOptions& opts = {});

// |a - b| / max(a, b, 1e-300)
double relative_gap(double a, double b);

}  // namespace blochcert
