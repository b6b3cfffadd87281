#include "blochcert/seminorms.hpp"

#include "blochcert/errors.hpp"
#include "blochcert/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace blochcert {

namespace {

constexpr double kDegenerate = 1e-12;
// Refinement never brings a pair closer than this, so the difference quotient stays well
// above rounding noise.
constexpr double kMinRefineSeparation = 1e-9;
constexpr double kRefineStepFloor = 1e-10;
constexpr int kMaxRefineMoves = 5000;
constexpr std::size_t kRefineSeeds = 4;

std::string format_point(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

// Canonical endpoint order so that numerical distances are exactly symmetric.
bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// omega-distance with tolerances relative to the chord; exact for const1.
double numeric_distance(const Vector& a, const Vector& b, const Weight& w, const GeodesicConfig& geo, NormSpec n) {
  if (a == b) return 0.0;
  const double chord = distance(a, b, n);
  if (w.is_constant_one()) return chord;
  GeodesicConfig local = geo;
  local.integrate_tol = geo.integrate_tol * chord;
  local.tol = geo.tol * chord;
  return lex_less(a, b) ? omega_distance(a, b, w, local, n).value : omega_distance(b, a, w, local, n).value;
}

}  // namespace

AdmissibleFn::AdmissibleFn(Evaluator eval, std::string label, bool requires_mapping)
    : eval_(std::move(eval)), label_(std::move(label)), requires_mapping_(requires_mapping) {
  if (!eval_) throw InvalidArgument("AdmissibleFn: empty evaluator");
}

AdmissibleFn symmetrize(const AdmissibleFn& psi) {
  return AdmissibleFn(
      [psi](const PairContext& c) { return std::max(psi(c), psi(PairContext{c.y, c.x, c.fy, c.fx})); },
      "sym:" + psi.label(), psi.requires_mapping());
}

AdmissibleFn scale(const AdmissibleFn& psi, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("admissible scale must be positive");
  std::ostringstream label;
  label.precision(17);
  label << "scale:" << c << ":" << psi.label();
  return AdmissibleFn([psi, c](const PairContext& ctx) { return c * psi(ctx); }, label.str(), psi.requires_mapping());
}

namespace admissible {

AdmissibleFn geometric_mean_phi(const OMFunction& phi, NormSpec n) {
  return AdmissibleFn(
      [phi, n](const PairContext& c) {
        return 1.0 / std::sqrt(om_derivative(phi, norm(c.x, n)) * om_derivative(phi, norm(c.y, n)));
      },
      "geometric_mean_phi:" + phi.spec(), false);
}

AdmissibleFn minmax(const Weight& omega, const Weight& co_omega) {
  return AdmissibleFn(
      [omega, co_omega](const PairContext& c) {
        return std::min(co_omega(c.fx), co_omega(c.fy)) / std::max(omega(c.x), omega(c.y));
      },
      "minmax", !co_omega.is_constant_one());
}

namespace {
double hyperbolic_factor(const Vector& x) {
  const double a = 1.0 - x.squaredNorm();
  if (!(a > 0.0)) throw DomainError("hyperbolic admissible function: point outside the open unit ball");
  return std::sqrt(a);
}
}  // namespace

AdmissibleFn hyperbolic() {
  return AdmissibleFn([](const PairContext& c) { return hyperbolic_factor(c.x) * hyperbolic_factor(c.y); },
                      "hyperbolic", false);
}

AdmissibleFn spherical_normal() {
  return AdmissibleFn(
      [](const PairContext& c) {
        return (hyperbolic_factor(c.x) * hyperbolic_factor(c.y)) /
               (std::sqrt(1.0 + c.fx.squaredNorm()) * std::sqrt(1.0 + c.fy.squaredNorm()));
      },
      "spherical_normal", true);
}

AdmissibleFn ratio(const Weight& omega, const Weight& co_omega, const GeodesicConfig& cfg, NormSpec domain_norm,
                   NormSpec codomain_norm) {
  cfg.validate();
  return AdmissibleFn(
      [omega, co_omega, cfg, domain_norm, codomain_norm](const PairContext& c) {
        if (c.x == c.y) return co_omega(c.fx) / omega(c.x);
        const double dw = numeric_distance(c.x, c.y, omega, cfg, domain_norm) / distance(c.x, c.y, domain_norm);
        if (c.fx == c.fy) return co_omega(c.fx) / dw;
        const double dco =
            numeric_distance(c.fx, c.fy, co_omega, cfg, codomain_norm) / distance(c.fx, c.fy, codomain_norm);
        return dco / dw;
      },
      "ratio", true);
}

}  // namespace admissible

AdmissibleFn parse_admissible(const std::string& label, const Weight& omega, const Weight& co_omega,
                              const GeodesicConfig& geo) {
  if (label == "hyperbolic") return admissible::hyperbolic();
  if (label == "spherical_normal") return admissible::spherical_normal();
  if (label == "minmax") return admissible::minmax(omega, co_omega);
  if (label == "ratio") return admissible::ratio(omega, co_omega, geo);
  if (label.rfind("geometric_mean_phi:", 0) == 0) {
    return admissible::geometric_mean_phi(OMFunction::parse(label.substr(19)));
  }
  if (label.rfind("sym:", 0) == 0) return symmetrize(parse_admissible(label.substr(4), omega, co_omega, geo));
  if (label.rfind("scale:", 0) == 0) {
    const auto colon = label.find(':', 6);
    if (colon != std::string::npos) {
      double c = 0.0;
      try {
        c = std::stod(label.substr(6, colon - 6));
      } catch (const std::logic_error&) {
        throw InvalidArgument("psi label: bad scale in '" + label + "'");
      }
      return scale(parse_admissible(label.substr(colon + 1), omega, co_omega, geo), c);
    }
  }
  throw InvalidArgument("unknown admissible function '" + label + "'");
}

// ---------------------------------------------------------------------------

void SupremumConfig::validate() const {
  if (interior_samples == 0) throw InvalidArgument("SupremumConfig: interior_samples must be positive");
  if (pair_samples < 2) throw InvalidArgument("SupremumConfig: pair_samples must be >= 2");
  if (refine_rounds < 0) throw InvalidArgument("SupremumConfig: refine_rounds must be >= 0");
  if (shell_deltas.empty()) throw InvalidArgument("SupremumConfig: shell_deltas must not be empty");
  for (const double d : shell_deltas) {
    if (!(d > 0.0)) throw InvalidArgument("SupremumConfig: shell deltas must be positive");
  }
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max({a, b, 1e-300}); }

double bloch_integrand(const MappingUnderTest& f, const Weight& omega, const Weight& co_omega, const Vector& x,
                       const DerivativeConfig& dcfg) {
  const Vector fx = f(x);
  const double dstar = f.jacobian
                           ? operator_norm(jacobian_at(f, x, dcfg), f.domain_norm, f.codomain_norm, dcfg)
                           : upper_derivative(f, x, dcfg).value;
  return co_omega(fx) * dstar / omega(x);
}

double lipschitz_ratio(const MappingUnderTest& f, const AdmissibleFn& psi, const Vector& x, const Vector& y) {
  const double d = distance(x, y, f.domain_norm);
  if (!(d > 0.0)) throw InvalidArgument("lipschitz_ratio: x and y coincide");
  const Vector fx = f(x);
  const Vector fy = f(y);
  return psi(PairContext{x, y, fx, fy}) * distance(fx, fy, f.codomain_norm) / d;
}

namespace {

void check_shells(const ConvexDomain& dom, const SupremumConfig& cfg) {
  if (!dom.bounded()) throw InvalidArgument("supremum estimation needs a bounded domain");
  for (const double d : cfg.shell_deltas) {
    if (!(d < dom.inradius())) throw InvalidArgument("shell delta exceeds the domain inradius");
  }
}

// Indices of the k largest values, ties resolved by index.
std::vector<std::size_t> top_indices(const std::vector<double>& values, std::size_t k) {
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

// Compass search maximizing `objective` over points produced by `moves`. Moves that throw
// or map to an infeasible point are skipped.
template <class Point, class Moves, class Objective>
void compass_maximize(Point& best, double& value, double step, Moves&& moves, Objective&& objective) {
  int budget = kMaxRefineMoves;
  while (step >= kRefineStepFloor && budget > 0) {
    bool improved = false;
    for (auto& cand : moves(best, step)) {
      if (--budget <= 0) break;
      double v = -std::numeric_limits<double>::infinity();
      try {
        v = objective(cand);
      } catch (const std::domain_error&) {
        continue;
      } catch (const NonConvergenceError&) {
        continue;
      }
      if (v > value) {
        value = v;
        best = std::move(cand);
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
}

double initial_refine_step(const ConvexDomain& dom) { return 0.05 * std::min(1.0, dom.inradius()); }

}  // namespace

BlochEstimate bloch_number(const MappingUnderTest& f, const Weight& omega, const Weight& co_omega,
                           const SupremumConfig& cfg, const DerivativeConfig& dcfg) {
  cfg.validate();
  dcfg.validate(f.dim);
  const ConvexDomain& dom = f.domain;
  check_shells(dom, cfg);

  BlochEstimate out;
  auto objective = [&](const Vector& x) {
    ++out.evaluations;
    return bloch_integrand(f, omega, co_omega, x, dcfg);
  };
  const double step0 = initial_refine_step(dom);
  std::optional<Vector> carried;

  for (const double delta : cfg.shell_deltas) {
    std::vector<Vector> cands = sample_interior(dom, f.dim, cfg.interior_samples, delta, cfg.seed);
    for (Vector& p : sample_shell(dom, f.dim, std::max<std::size_t>(1, cfg.interior_samples / 4), delta, cfg.seed)) {
      cands.push_back(std::move(p));
    }
    if (carried && dom.depth(*carried) >= delta) cands.push_back(*carried);

    std::vector<double> values;
    values.reserve(cands.size());
    for (const Vector& p : cands) values.push_back(objective(p));

    auto moves = [&](const Vector& x, double step) {
      std::vector<Vector> out_moves;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (const double sign : {1.0, -1.0}) {
          Vector c = x;
          c[i] += sign * step;
          c = project(dom, c, delta);
          if (c != x) out_moves.push_back(std::move(c));
        }
      }
      return out_moves;
    };

    Vector best_x = cands.front();
    double best_v = values.front();
    for (const std::size_t k : top_indices(values, kRefineSeeds)) {
      Vector x = cands[k];
      double v = values[k];
      if (cfg.refine_rounds > 0) compass_maximize(x, v, step0, moves, objective);
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] > best_v) {
        best_v = values[k];
        best_x = cands[k];
      }
    }
    for (int round = 1; round < cfg.refine_rounds; ++round) {
      compass_maximize(best_x, best_v, std::ldexp(step0, -round), moves, objective);
    }

    out.shells.push_back(BlochShell{delta, best_v, best_x});
    carried = best_x;
    if (out.shells.size() == 1 || best_v > out.value) {
      out.value = best_v;
      out.argmax = best_x;
    }
  }
  return out;
}

LipschitzEstimate lipschitz_number(const MappingUnderTest& f, const AdmissibleFn& psi, const SupremumConfig& cfg) {
  cfg.validate();
  const ConvexDomain& dom = f.domain;
  check_shells(dom, cfg);
  const Eigen::Index m = f.dim;
  if (2 * m > 32) throw InvalidArgument("lipschitz_number supports dimension <= 16");

  LipschitzEstimate out;
  using Pair = std::pair<Vector, Vector>;
  auto objective = [&](const Pair& p) {
    ++out.evaluations;
    return lipschitz_ratio(f, psi, p.first, p.second);
  };
  const double step0 = initial_refine_step(dom);
  const auto [lo, hi] = dom.bounding_box(m);
  std::optional<Pair> carried;

  for (const double delta : cfg.shell_deltas) {
    std::vector<Pair> pairs;
    const std::size_t n_global = cfg.pair_samples / 2;
    const std::size_t n_near = cfg.pair_samples - n_global;

    HaltonSequence halton(static_cast<int>(2 * m), cfg.seed + 1);
    for (std::size_t attempts = 0; pairs.size() < n_global && attempts < 1000 * n_global; ++attempts) {
      const Vector u = halton.next();
      Vector x = lo.array() + (hi - lo).array() * u.head(m).array();
      Vector y = lo.array() + (hi - lo).array() * u.tail(m).array();
      if (dom.depth(x) >= delta && dom.depth(y) >= delta) pairs.emplace_back(std::move(x), std::move(y));
    }

    const std::size_t n_shell = n_near / 4;
    std::vector<Vector> bases = sample_interior(dom, m, n_near - n_shell, delta, cfg.seed + 2);
    if (n_shell > 0) {
      for (Vector& p : sample_shell(dom, m, n_shell, delta, cfg.seed + 3)) bases.push_back(std::move(p));
    }
    const auto dirs = quasi_uniform_directions(m, bases.size(), cfg.seed + 4);
    for (std::size_t k = 0; k < bases.size(); ++k) {
      const Vector& x = bases[k];
      const double r = 1e-3 * std::min(1.0, dom.depth(x));
      pairs.emplace_back(x, project(dom, x + r * dirs[k], delta));
    }
    if (carried && dom.depth(carried->first) >= delta && dom.depth(carried->second) >= delta) {
      pairs.push_back(*carried);
    }

    std::vector<Pair> kept;
    std::vector<double> values;
    for (Pair& p : pairs) {
      if (distance(p.first, p.second, f.domain_norm) < kDegenerate) {
        ++out.skipped_degenerate;
        continue;
      }
      values.push_back(objective(p));
      kept.push_back(std::move(p));
    }
    if (kept.empty()) throw InvalidArgument("lipschitz_number: no admissible pairs sampled");

    auto moves = [&](const Pair& p, double step) {
      std::vector<Pair> out_moves;
      auto push = [&](Vector x, Vector y) {
        x = project(dom, x, delta);
        y = project(dom, y, delta);
        if (distance(x, y, f.domain_norm) < kMinRefineSeparation) return;
        if (x == p.first && y == p.second) return;
        out_moves.emplace_back(std::move(x), std::move(y));
      };
      for (Eigen::Index i = 0; i < m; ++i) {
        for (const double sign : {1.0, -1.0}) {
          Vector e = Vector::Zero(m);
          e[i] = sign * step;
          push(p.first + e, p.second + e);
          push(p.first + e, p.second);
          push(p.first, p.second + e);
        }
      }
      push(p.first, p.first + 0.5 * (p.second - p.first));
      push(p.first, p.first + 2.0 * (p.second - p.first));
      return out_moves;
    };

    Pair best = kept.front();
    double best_v = values.front();
    for (const std::size_t k : top_indices(values, kRefineSeeds)) {
      Pair p = kept[k];
      double v = values[k];
      if (cfg.refine_rounds > 0) compass_maximize(p, v, step0, moves, objective);
      if (v > best_v) {
        best_v = v;
        best = p;
      }
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] > best_v) {
        best_v = values[k];
        best = kept[k];
      }
    }
    for (int round = 1; round < cfg.refine_rounds; ++round) {
      compass_maximize(best, best_v, std::ldexp(step0, -round), moves, objective);
    }

    out.shells.push_back(LipschitzShell{delta, best_v, best.first, best.second});
    carried = best;
    if (out.shells.size() == 1 || best_v > out.value) {
      out.value = best_v;
      out.x = best.first;
      out.y = best.second;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class ConditionAccumulator {
 public:
  ConditionAccumulator(std::string name, std::size_t max_witnesses) : max_witnesses_(max_witnesses) {
    report_.name = std::move(name);
  }

  void add(const Vector& x, const Vector& y, double slack, double threshold) {
    ++report_.checked;
    if (report_.checked == 1 || slack < report_.worst_slack) report_.worst_slack = slack;
    report_.threshold = std::max(report_.threshold, threshold);
    if (slack < -threshold) {
      report_.pass = false;
      report_.witnesses.push_back(Witness{x, y, slack});
      std::stable_sort(report_.witnesses.begin(), report_.witnesses.end(),
                       [](const Witness& a, const Witness& b) { return a.slack < b.slack; });
      if (report_.witnesses.size() > max_witnesses_) report_.witnesses.resize(max_witnesses_);
    }
  }

  ConditionReport finish(bool one_sided = false) {
    report_.one_sided = one_sided;
    return std::move(report_);
  }

 private:
  ConditionReport report_;
  std::size_t max_witnesses_;
};

template <class F>
auto with_pair_context(const Vector& x, const Vector& y, F&& fn) {
  const std::string where = " at pair " + format_point(x) + " " + format_point(y);
  try {
    return fn();
  } catch (const NonConvergenceError& e) {
    throw NonConvergenceError(e.what() + where, e.previous(), e.last());
  } catch (const PoleError& e) {
    throw PoleError(e.what() + where);
  } catch (const DomainError& e) {
    throw DomainError(e.what() + where);
  }
}

}  // namespace

AdmissibilityReport check_admissible(const AdmissibleFn& psi, const MappingUnderTest& f, const Weight& omega,
                                     const Weight& co_omega, const AdmissibilityConfig& cfg) {
  if (cfg.pairs == 0) throw InvalidArgument("check_admissible: pairs must be positive");
  cfg.geo.validate();
  const ConvexDomain& dom = f.domain;
  if (!dom.bounded()) throw InvalidArgument("check_admissible needs a bounded domain");
  if (!(cfg.margin > 0.0 && cfg.margin < dom.inradius())) {
    throw InvalidArgument("check_admissible: margin must lie in (0, inradius)");
  }
  const Eigen::Index m = f.dim;
  const bool simplified = co_omega.is_constant_one();

  AdmissibilityReport report;
  const bool have_closed = omega.closed_form_distance().has_value() &&
                           (simplified || co_omega.closed_form_distance().has_value());
  bool closed = false;
  switch (cfg.distances) {
    case DistanceSource::automatic: closed = have_closed; break;
    case DistanceSource::closed_form:
      if (!have_closed) throw InvalidArgument("check_admissible: no closed-form distance for these weights");
      closed = true;
      break;
    case DistanceSource::numerical: closed = false; break;
  }
  report.distance_source = closed ? "closed_form" : "numerical";
  report.budget = closed ? 0.0 : 3.0 * (cfg.geo.integrate_tol + cfg.geo.tol);

  auto d_omega = [&](const Vector& a, const Vector& b) {
    return closed ? (*omega.closed_form_distance())(a, b) : numeric_distance(a, b, omega, cfg.geo, f.domain_norm);
  };
  auto d_co = [&](const Vector& a, const Vector& b) {
    if (a == b) return 0.0;
    if (simplified) return distance(a, b, f.codomain_norm);
    return closed ? (*co_omega.closed_form_distance())(a, b)
                  : numeric_distance(a, b, co_omega, cfg.geo, f.codomain_norm);
  };

  // half global pairs, half near-diagonal pairs at depth-relative radii 1e-1, 1e-2, 1e-3
  const std::size_t n_global = (cfg.pairs + 1) / 2;
  std::vector<std::pair<Vector, Vector>> pairs;
  {
    const auto xs = sample_interior(dom, m, cfg.pairs, cfg.margin, cfg.seed);
    const auto ys = sample_interior(dom, m, n_global, cfg.margin, cfg.seed + 1);
    const auto dirs = quasi_uniform_directions(m, cfg.pairs - n_global, cfg.seed + 2);
    for (std::size_t k = 0; k < n_global; ++k) {
      if (xs[k] != ys[k]) pairs.emplace_back(xs[k], ys[k]);
    }
    for (std::size_t k = 0; k + n_global < cfg.pairs; ++k) {
      const Vector& x = xs[n_global + k];
      const double r = (dom.depth(x) - cfg.margin / 2) * std::pow(10.0, -1.0 - static_cast<double>(k % 3));
      pairs.emplace_back(x, x + r * dirs[k]);
    }
  }

  // (1) symmetry
  {
    ConditionAccumulator acc("symmetry", cfg.max_witnesses);
    for (const auto& [x, y] : pairs) {
      const Vector fx = f(x), fy = f(y);
      const double a = psi(PairContext{x, y, fx, fy});
      const double b = psi(PairContext{y, x, fy, fx});
      acc.add(x, y, -std::abs(a - b), 1e-12 * std::max(std::abs(a), std::abs(b)));
    }
    report.conditions.push_back(acc.finish());
  }

  // (2) diagonal identity
  {
    ConditionAccumulator acc("diagonal", cfg.max_witnesses);
    for (const auto& [x, y] : pairs) {
      (void)y;
      const Vector fx = f(x);
      const double expected = co_omega(fx) / omega(x);
      const double got = psi(PairContext{x, x, fx, fx});
      acc.add(x, x, -std::abs(got - expected), 1e-12 * std::abs(expected));
    }
    report.conditions.push_back(acc.finish());
  }

  // (3) lower semicontinuity toward the diagonal, along finitely many sequences
  {
    ConditionAccumulator acc("liminf", cfg.max_witnesses);
    const auto bases = sample_interior(dom, m, std::max<std::size_t>(1, cfg.limit_points), cfg.margin, cfg.seed + 3);
    const auto dirs = quasi_uniform_directions(m, 4, cfg.seed + 4);
    for (const Vector& x : bases) {
      const Vector fx = f(x);
      const double diag = psi(PairContext{x, x, fx, fx});
      for (const Vector& u : dirs) {
        double tail = std::numeric_limits<double>::infinity();
        Vector last_y = x;
        for (const double r : {1e-2, 1e-3, 1e-4, 1e-5}) {
          const Vector y = x + r * std::min(1.0, dom.depth(x)) * u;
          const Vector fy = f(y);
          tail = with_pair_context(x, y, [&] { return psi(PairContext{x, y, fx, fy}); });
          last_y = y;
        }
        acc.add(x, last_y, tail / diag - 1.0, 1e-3);
      }
    }
    report.conditions.push_back(acc.finish(true));
  }

  // (4') or (4)
  {
    ConditionAccumulator acc(simplified ? "distance_simplified" : "distance", cfg.max_witnesses);
    for (const auto& [x, y] : pairs) {
      const Vector fx = f(x), fy = f(y);
      const double p = psi(PairContext{x, y, fx, fy});
      const double dxy = distance(x, y, f.domain_norm);
      const double dw = with_pair_context(x, y, [&] { return d_omega(x, y); });
      if (simplified) {
        const double lhs = p * dw;
        acc.add(x, y, dxy - lhs, closed ? 1e-12 : report.budget * lhs);
      } else {
        const double dfy = distance(fx, fy, f.codomain_norm);
        if (dfy == 0.0) {
          acc.add(x, y, 0.0, 0.0);
          continue;
        }
        const double lhs = p * dfy / dxy;
        const double rhs = with_pair_context(x, y, [&] { return d_co(fx, fy); }) / dw;
        acc.add(x, y, rhs - lhs, (closed ? 1e-12 : report.budget) * std::max(lhs, rhs));
      }
    }
    report.conditions.push_back(acc.finish());
  }

  report.pass = std::all_of(report.conditions.begin(), report.conditions.end(),
                            [](const ConditionReport& c) { return c.pass; });
  return report;
}

// ---------------------------------------------------------------------------

EqualityCertificate certify_equality(const MappingUnderTest& f, const Weight& omega, const Weight& co_omega,
                                     const AdmissibleFn& psi, const SupremumConfig& cfg,
                                     const CertifyOptions& opts) {
  if (!(opts.tolerance >= 0.0)) throw InvalidArgument("certify_equality: tolerance must be nonnegative");
  cfg.validate();
  EqualityCertificate cert;
  cert.tolerance = opts.tolerance;
  cert.config = cfg;
  cert.admissibility_waived = opts.waive_admissibility;

  auto guarded = [&](const std::string& stage, auto&& fn) {
    try {
      fn();
    } catch (const NonConvergenceError& e) {
      cert.failures.push_back(stage + ": " + e.what());
      cert.numerical_failure = true;
    } catch (const std::domain_error& e) {
      cert.failures.push_back(stage + ": " + e.what());
      cert.numerical_failure = true;
    }
  };

  if (!opts.waive_admissibility) {
    guarded("admissibility", [&] {
      AdmissibilityConfig acfg = opts.admissibility;
      acfg.seed = cfg.seed;
      cert.admissibility = check_admissible(psi, f, omega, co_omega, acfg);
      for (const ConditionReport& c : cert.admissibility->conditions) {
        if (!c.pass) cert.failures.push_back("admissibility: condition '" + c.name + "' violated");
      }
    });
  }
  bool have_bloch = false, have_lipschitz = false;
  guarded("bloch", [&] {
    cert.bloch = bloch_number(f, omega, co_omega, cfg, opts.derivative);
    have_bloch = true;
  });
  guarded("lipschitz", [&] {
    cert.lipschitz = lipschitz_number(f, psi, cfg);
    have_lipschitz = true;
  });

  if (have_bloch) {
    cert.bloch_estimate = cert.bloch.value;
    cert.argmax_point = cert.bloch.argmax;
  }
  if (have_lipschitz) {
    cert.lipschitz_estimate = cert.lipschitz.value;
    cert.argmax_pair_x = cert.lipschitz.x;
    cert.argmax_pair_y = cert.lipschitz.y;
  }
  cert.relative_gap = relative_gap(cert.bloch_estimate, cert.lipschitz_estimate);
  cert.pass = cert.failures.empty() && have_bloch && have_lipschitz && cert.relative_gap <= cert.tolerance;
  return cert;
}

}  // namespace blochcert
