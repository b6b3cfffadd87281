#include "blochcert/operator_monotone.hpp"

#include "blochcert/errors.hpp"
#include "blochcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blochcert {

OMFunction OMFunction::artanh() { return OMFunction(); }

OMFunction OMFunction::nevanlinna(double phi0, double dphi0, std::vector<Atom> atoms) {
  if (!std::isfinite(phi0)) throw InvalidArgument("nevanlinna: phi0 must be finite");
  if (!(dphi0 > 0.0) || !std::isfinite(dphi0)) throw InvalidArgument("nevanlinna: dphi0 must be positive");
  if (atoms.empty()) throw InvalidArgument("nevanlinna: at least one atom required");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.t >= -1.0 && a.t <= 1.0)) throw InvalidArgument("nevanlinna: atom position outside [-1,1]");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) throw InvalidArgument("nevanlinna: atom weight must be positive");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("nevanlinna: atom weights must sum to 1");
  OMFunction f;
  f.kind_ = Kind::nevanlinna;
  f.phi0_ = phi0;
  f.dphi0_ = dphi0;
  f.atoms_ = std::move(atoms);
  return f;
}

std::string OMFunction::spec() const {
  if (kind_ == Kind::artanh) return "artanh";
  std::ostringstream os;
  os.precision(17);
  os << "nev:phi0=" << phi0_ << ",dphi0=" << dphi0_ << ",atoms=(";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    os << (i ? ";" : "") << atoms_[i].t << ":" << atoms_[i].weight;
  }
  os << ")";
  return os.str();
}

namespace {

double parse_number(const std::string& s, const std::string& whole) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw InvalidArgument("om-spec: bad number '" + s + "' in '" + whole + "'");
}

}  // namespace

OMFunction OMFunction::parse(const std::string& spec) {
  if (spec == "artanh") return artanh();
  const std::string prefix = "nev:";
  if (spec.rfind(prefix, 0) != 0) throw InvalidArgument("om-spec: expected 'artanh' or 'nev:...', got '" + spec + "'");
  const auto open = spec.find("atoms=(");
  const auto close = spec.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw InvalidArgument("om-spec: missing atoms=(...) in '" + spec + "'");
  }
  std::optional<double> phi0, dphi0;
  std::stringstream head(spec.substr(prefix.size(), open - prefix.size()));
  std::string field;
  while (std::getline(head, field, ',')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw InvalidArgument("om-spec: bad field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const double value = parse_number(field.substr(eq + 1), spec);
    if (key == "phi0") {
      phi0 = value;
    } else if (key == "dphi0") {
      dphi0 = value;
    } else {
      throw InvalidArgument("om-spec: unknown field '" + key + "'");
    }
  }
  if (!phi0 || !dphi0) throw InvalidArgument("om-spec: phi0 and dphi0 are required");
  std::vector<Atom> atoms;
  std::stringstream body(spec.substr(open + 7, close - open - 7));
  std::string item;
  while (std::getline(body, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidArgument("om-spec: atom '" + item + "' must read t:w");
    atoms.push_back({parse_number(item.substr(0, colon), spec), parse_number(item.substr(colon + 1), spec)});
  }
  return nevanlinna(*phi0, *dphi0, std::move(atoms));
}

namespace {

void require_open_interval(double t) {
  if (!(t > -1.0 && t < 1.0)) throw InvalidArgument("operator monotone evaluation requires |t| < 1");
}

double pole_factor(const Atom& a, double t) {
  const double q = 1.0 - a.t * t;
  if (q == 0.0) throw PoleError("nevanlinna atom pole hit at t = " + std::to_string(t));
  return q;
}

}  // namespace

double om_eval(const OMFunction& phi, double t) {
  require_open_interval(t);
  if (phi.kind() == OMFunction::Kind::artanh) return std::atanh(t);
  double acc = 0.0;
  for (const Atom& a : phi.atoms()) acc += a.weight * t / pole_factor(a, t);
  return phi.phi0() + phi.dphi0() * acc;
}

double om_derivative(const OMFunction& phi, double t) {
  require_open_interval(t);
  if (phi.kind() == OMFunction::Kind::artanh) return 1.0 / (1.0 - t * t);
  double acc = 0.0;
  for (const Atom& a : phi.atoms()) {
    const double q = pole_factor(a, t);
    acc += a.weight / (q * q);
  }
  return phi.dphi0() * acc;
}

double sqrt_mean_slack(const OMFunction& phi, double s, double t) {
  if (!(s < t)) throw InvalidArgument("sqrt_mean_slack requires s < t");
  return std::sqrt(om_derivative(phi, t) * om_derivative(phi, s)) * (t - s) - (om_eval(phi, t) - om_eval(phi, s));
}

DerivativeMonotonicity is_derivative_increasing(const OMFunction& phi, double hi, int samples) {
  if (samples < 2) throw InvalidArgument("is_derivative_increasing needs at least two samples");
  if (!(hi > 0.0 && hi <= 1.0)) throw InvalidArgument("is_derivative_increasing needs 0 < hi <= 1");
  DerivativeMonotonicity out;
  if (phi.kind() == OMFunction::Kind::nevanlinna) {
    bool nonneg = true;
    for (const Atom& a : phi.atoms()) nonneg = nonneg && a.t >= 0.0;
    out.atoms_nonnegative = nonneg;
  }
  double prev_t = 0.0;
  double prev = om_derivative(phi, 0.0);
  for (int k = 1; k < samples; ++k) {
    const double t = hi * static_cast<double>(k) / static_cast<double>(samples);
    const double v = om_derivative(phi, t);
    if (v < prev) {
      out.increasing = false;
      out.witness = std::pair{prev_t, t};
      break;
    }
    prev = v;
    prev_t = t;
  }
  return out;
}

SlackSurvey sqrt_mean_slack_survey(const OMFunction& phi, std::size_t pairs, double range, std::uint64_t seed,
                                   double threshold) {
  if (pairs == 0) throw InvalidArgument("slack survey: pairs must be positive");
  if (!(range > 0.0 && range < 1.0)) throw InvalidArgument("slack survey: range must lie in (0,1)");
  SlackSurvey out;
  out.threshold = threshold;
  std::vector<double> slacks;
  HaltonSequence h(2, seed);
  while (slacks.size() < pairs) {
    const auto u = h.next();
    double s = range * (2.0 * u[0] - 1.0);
    double t = range * (2.0 * u[1] - 1.0);
    if (s == t) continue;
    if (s > t) std::swap(s, t);
    const double v = sqrt_mean_slack(phi, s, t);
    if (slacks.empty() || v < out.min_slack) {
      out.min_slack = v;
      out.argmin = {s, t};
    }
    if (v < -threshold) ++out.violations;
    slacks.push_back(v);
  }
  out.pairs = slacks.size();
  std::sort(slacks.begin(), slacks.end());
  out.median_slack = slacks[slacks.size() / 2];
  out.max_slack = slacks.back();
  return out;
}

OMFunction random_nevanlinna(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  std::uniform_real_distribution<double> mass(0.05, 1.0);
  const int n = count(rng);
  std::vector<Atom> atoms(static_cast<std::size_t>(n));
  double total = 0.0;
  std::bernoulli_distribution endpoint(0.2);
  for (Atom& a : atoms) {
    a.t = pos(rng);
    if (endpoint(rng)) a.t = a.t < 0.0 ? -1.0 : 1.0;
    a.weight = mass(rng);
    total += a.weight;
  }
  for (Atom& a : atoms) a.weight /= total;
  const double phi0 = pos(rng);
  const double dphi0 = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
  return OMFunction::nevanlinna(phi0, dphi0, std::move(atoms));
}

}  // namespace blochcert
