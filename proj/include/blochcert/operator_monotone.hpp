#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace blochcert {

// Point mass of the representing probability measure on [-1, 1].
struct Atom {
  double t = 0.0;
  double weight = 1.0;
};

// Operator monotone function on (-1, 1): either artanh or the atomic form
//   phi(z) = phi(0) + phi'(0) * sum_i w_i z / (1 - t_i z),   sum_i w_i = 1.
class OMFunction {
 public:
  enum class Kind { artanh, nevanlinna };

  static OMFunction artanh();
  // Throws InvalidArgument unless dphi0 > 0, atoms lie in [-1,1] with positive weights
  // summing to 1 (to 1e-9).
  static OMFunction nevanlinna(double phi0, double dphi0, std::vector<Atom> atoms);

  Kind kind() const noexcept { return kind_; }
  double phi0() const noexcept { return phi0_; }
  double dphi0() const noexcept { return dphi0_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  // om-spec text: "artanh" or "nev:phi0=<v>,dphi0=<v>,atoms=(t1:w1;t2:w2;...)"
  std::string spec() const;
  static OMFunction parse(const std::string& spec);

 private:
  OMFunction() = default;
  Kind kind_ = Kind::artanh;
  double phi0_ = 0.0;
  double dphi0_ = 1.0;
  std::vector<Atom> atoms_;
};

// Throws InvalidArgument for |t| >= 1 and PoleError when some 1 - t_i t vanishes.
double om_eval(const OMFunction& phi, double t);
double om_derivative(const OMFunction& phi, double t);

// sqrt(phi'(t) phi'(s)) (t - s) - (phi(t) - phi(s)) for s < t; nonnegative for every
// operator monotone phi.
double sqrt_mean_slack(const OMFunction& phi, double s, double t);

struct DerivativeMonotonicity {
  bool increasing = true;
  // First grid pair (a, b), a < b, with phi'(a) > phi'(b).
  std::optional<std::pair<double, double>> witness;
  // For atomic forms: whether mu((-1,0)) = 0, which suffices for phi' increasing on [0,1).
  std::optional<bool> atoms_nonnegative;
};

// Checks phi' non-decreasing on a uniform grid of `samples` points in [0, hi).
DerivativeMonotonicity is_derivative_increasing(const OMFunction& phi, double hi, int samples);

struct SlackSurvey {
  std::size_t pairs = 0;
  double min_slack = 0.0;
  double median_slack = 0.0;
  double max_slack = 0.0;
  std::size_t violations = 0;  // slack < -threshold
  double threshold = 1e-12;
  std::pair<double, double> argmin{0.0, 0.0};  // (s, t) attaining min_slack
};

// sqrt_mean_slack over `pairs` low-discrepancy pairs s < t in [-range, range], range < 1.
SlackSurvey sqrt_mean_slack_survey(const OMFunction& phi, std::size_t pairs, double range, std::uint64_t seed,
                                   double threshold = 1e-12);

// Random atomic function: 1-5 atoms anywhere in [-1,1], phi0 in [-1,1], dphi0 in [0.1,3].
OMFunction random_nevanlinna(std::mt19937_64& rng);

}  // namespace blochcert
