// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any fails.
#include "blochcert/cli.hpp"
#include "blochcert/corpus.hpp"
#include "blochcert/errors.hpp"
#include "blochcert/omega_distance.hpp"
#include "blochcert/seminorms.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace blochcert;
using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "blochcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  return r;
}

class Criterion {
 public:
  explicit Criterion(std::ostringstream& log) : log_(log) {}
  void require(bool ok, const std::string& what) {
    log_ << "    " << (ok ? "ok   " : "FAIL ") << what << "\n";
    pass_ = pass_ && ok;
  }
  bool pass() const { return pass_; }

 private:
  std::ostringstream& log_;
  bool pass_ = true;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vector point_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Vector v(2);
    v << u(rng), u(rng);
    if (v.norm() < 1.0) return radius * v;
  }
}

struct Setup {
  CorpusEntry entry;
  Weight omega, co_omega;
  AdmissibleFn psi;
};

Setup setup(const std::string& label) {
  CorpusEntry e = corpus_get(label);
  Weight w = Weight::parse(e.weight), cw = Weight::parse(e.coweight);
  AdmissibleFn psi = parse_admissible(e.psi, w, cw);
  return {std::move(e), std::move(w), std::move(cw), std::move(psi)};
}

const std::vector<std::string> kDistanceCmd{"distance", "--weight", "hyperbolic", "--from", "0,0", "--to", "0.5,0"};
const std::vector<std::string> kLimCmd{"lim-check", "--weight", "hyperbolic", "--at", "0.3,0",
                                       "--radii", "0.1,0.01,0.001"};
const std::vector<std::string> kCertifyIdentity{"certify", "--map", "identity_disk", "--weight", "hyperbolic",
                                                "--coweight", "const1", "--psi", "hyperbolic", "--tol", "0.02"};
const std::vector<std::string> kCertifyMoebius{"certify", "--map", "moebius_a0.5", "--tol", "0.02"};
const std::vector<std::string> kBlochLog{"bloch", "--map", "log_bloch"};
const std::vector<std::string> kOmCheck{"om-check", "--om", "artanh", "--pairs", "1000"};
const std::vector<std::string> kAdmissible{"admissible-check", "--psi", "hyperbolic", "--map", "identity_disk",
                                           "--pairs", "1000", "--distances", "closed_form"};
const std::vector<std::string> kCertifyNormal{"certify", "--map", "normal_pole", "--tol", "0.03"};

void c1(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const CliRun r = cli(kDistanceCmd);
  const double secs = seconds_since(t0);
  c.require(r.code == 0, "exit code 0");
  if (r.code != 0) return;
  const double v = json::parse(r.out).at("results").at("distance").at("value").get<double>();
  c.require(std::abs(v - 0.549306) <= 1e-3, "distance " + num(v) + " within 1e-3 of 0.549306");
  c.require(secs < 10.0, "runtime " + num(secs) + " s < 10 s");
}

void c2(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  const Weight w = Weight::hyperbolic();
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vector x = point_in_disk(rng, 0.8), y = point_in_disk(rng, 0.8);
    const double d = omega_distance(x, y, w).value;
    const double g = omega_distance_grid_oracle(x, y, w, 400);
    worst = std::max(worst, std::abs(d - g) / g);
  }
  const double secs = seconds_since(t0);
  c.require(worst <= 0.02, "worst relative difference " + num(worst) + " <= 0.02 over 10 pairs");
  c.require(secs < 120.0, "runtime " + num(secs) + " s < 120 s");
}

void c3(Criterion& c) {
  const CliRun r = cli(kLimCmd);
  c.require(r.code == 0, "exit code 0");
  if (r.code != 0) return;
  const json t = json::parse(r.out).at("results");
  const json& last = t.at("rows")[2];
  const double lo = last.at("min_ratio").get<double>(), hi = last.at("max_ratio").get<double>();
  c.require(std::abs(lo - 1.098901) <= 1e-2 && std::abs(hi - 1.098901) <= 1e-2,
            "ratios at r = 1e-3 in [" + num(lo) + ", " + num(hi) + "], within 1e-2 of 1.098901");
  c.require(t.at("deviations_shrinking").get<bool>(), "deviations shrink over radii 1e-1, 1e-2, 1e-3");
}

void c4(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const CliRun r = cli(kCertifyIdentity);
  const double secs = seconds_since(t0);
  c.require(r.code == 0, "exit code 0");
  if (r.code != 0) return;
  const json j = json::parse(r.out).at("results");
  const double b = j.at("bloch_estimate").get<double>(), l = j.at("lipschitz_estimate").get<double>();
  c.require(std::abs(b - 1.0) <= 0.02, "B = " + num(b) + " within 2% of 1");
  c.require(std::abs(l - 1.0) <= 0.02, "L = " + num(l) + " within 2% of 1");
  c.require(j.at("pass").get<bool>(), "certificate passes at tol 0.02");
  c.require(secs < 60.0, "runtime " + num(secs) + " s < 60 s");
}

void c5(Criterion& c) {
  const CliRun r = cli(kCertifyMoebius);
  c.require(r.code == 0, "exit code 0");
  if (r.code != 0) return;
  const json j = json::parse(r.out).at("results");
  const double b = j.at("bloch_estimate").get<double>();
  c.require(std::abs(b - 1.0) <= 0.02, "B = " + num(b) + " within 2% of 1");
  c.require(j.at("pass").get<bool>() && j.at("relative_gap").get<double>() <= 0.02,
            "L = " + num(j.at("lipschitz_estimate").get<double>()) + " certifies at tol 0.02");
}

void c6(Criterion& c) {
  const CliRun r = cli(kBlochLog);
  c.require(r.code == 0, "exit code 0");
  if (r.code != 0) return;
  const json j = json::parse(r.out).at("results");
  const double v = j.at("estimate").get<double>();
  c.require(v >= 1.90 && v <= 2.00, "estimate " + num(v) + " in [1.90, 2.00]");
  const json& s = j.at("shells");
  bool increasing = s.size() == 3;
  std::string values;
  for (std::size_t i = 0; i < s.size(); ++i) {
    values += (i ? ", " : "") + num(s[i].at("value").get<double>());
    if (i > 0) increasing = increasing && s[i].at("value").get<double>() > s[i - 1].at("value").get<double>();
  }
  c.require(increasing, "strictly increasing over shells 1e-2, 1e-3, 1e-4: " + values);
}

void c7(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const SlackSurvey a = sqrt_mean_slack_survey(OMFunction::artanh(), 1000, 0.95, 42);
  c.require(a.violations == 0 && a.min_slack >= -1e-12, "artanh min slack " + num(a.min_slack));
  std::mt19937_64 rng(42);
  double worst = 0.0;
  std::size_t violations = 0;
  for (int k = 0; k < 20; ++k) {
    const OMFunction phi = random_nevanlinna(rng);
    const SlackSurvey s = sqrt_mean_slack_survey(phi, 1000, 0.95, 42 + k);
    worst = std::min(worst, s.min_slack);
    violations += s.violations;
  }
  c.require(violations == 0 && worst >= -1e-12, "20 atomic functions, min slack " + num(worst));
  const double secs = seconds_since(t0);
  c.require(secs < 10.0, "runtime " + num(secs) + " s < 10 s");
}

void c8(Criterion& c) {
  const auto id = setup("identity_disk");
  AdmissibilityConfig cfg;
  cfg.pairs = 1000;
  cfg.distances = DistanceSource::closed_form;
  const auto h = check_admissible(admissible::hyperbolic(), id.entry.mapping, id.omega, id.co_omega, cfg);
  const ConditionReport& hs = h.conditions.back();
  c.require(hs.name == "distance_simplified" && hs.pass && hs.worst_slack >= -1e-12 && hs.checked == 1000,
            "hyperbolic Psi, closed form, 1000 pairs: worst slack " + num(hs.worst_slack));
  c.require(h.pass, "hyperbolic Psi passes every condition");

  const OMFunction phi = OMFunction::artanh();
  AdmissibilityConfig num_cfg;
  num_cfg.distances = DistanceSource::numerical;
  const auto gm = check_admissible(admissible::geometric_mean_phi(phi), id.entry.mapping, Weight::phi_prime(phi),
                                   Weight::constant_one(), num_cfg);
  const ConditionReport& gs = gm.conditions.back();
  c.require(gm.pass && gm.distance_source == "numerical",
            "geometric_mean_phi(artanh), numerical distances: worst relative slack " + num(gs.worst_slack) +
                " against budget " + num(gm.budget));

  const auto bad = check_admissible(scale(admissible::hyperbolic(), 2.0), id.entry.mapping, id.omega, id.co_omega, cfg);
  const ConditionReport& bs = bad.conditions.back();
  c.require(!bad.pass && !bs.pass && !bs.witnesses.empty(),
            "x2-scaled Psi fails with " + std::to_string(bs.witnesses.size()) + " witnesses");
}

void c9(Criterion& c) {
  const OMFunction phi = OMFunction::artanh();
  const Weight w = Weight::phi_prime(phi), one = Weight::constant_one();
  const AdmissibleFn mm = admissible::minmax(w, one), gm = admissible::geometric_mean_phi(phi);
  std::mt19937_64 rng(9);
  std::size_t violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const Vector x = point_in_disk(rng, 0.99), y = point_in_disk(rng, 0.99);
    if (mm(PairContext{x, y, x, y}) > gm(PairContext{x, y, x, y})) ++violations;
  }
  c.require(violations == 0, "min <= geometric mean on 1000 pairs (" + std::to_string(violations) + " violations)");

  const auto id = setup("identity_disk");
  CertifyOptions opts;
  opts.tolerance = 0.03;
  const auto a = certify_equality(id.entry.mapping, id.omega, id.co_omega, admissible::minmax(id.omega, id.co_omega),
                                  {}, opts);
  const auto b = certify_equality(id.entry.mapping, id.omega, id.co_omega, gm, {}, opts);
  c.require(a.pass, "minmax certifies: gap " + num(a.relative_gap));
  c.require(b.pass, "geometric mean certifies: gap " + num(b.relative_gap));
  c.require(a.bloch_estimate == b.bloch_estimate, "same B = " + num(a.bloch_estimate));
}

void c10(Criterion& c) {
  const CliRun r = cli(kCertifyNormal);
  c.require(r.code == 0 || r.code == 1, "certify ran");
  if (r.code != 0 && r.code != 1) return;
  const json j = json::parse(r.out).at("results");
  const double b = j.at("bloch_estimate").get<double>(), gap = j.at("relative_gap").get<double>();
  c.require(b <= 1.0 + 1e-3, "B = " + num(b) + " <= 1 + 1e-3");
  c.require(gap <= 0.03, "B/L gap " + num(gap) + " <= 3%");
}

void c11(Criterion& c) {
  std::mt19937_64 rng(11);
  for (const auto& label : corpus_list()) {
    const CorpusEntry e = corpus_get(label);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100;) {
      Vector x(e.mapping.dim);
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = u(rng);
      if (x.norm() >= 0.99) continue;
      ++k;
      const double ud = upper_derivative(e.mapping, x).value;
      const double op = operator_norm(jacobian_at(e.mapping, x), e.mapping.domain_norm, e.mapping.codomain_norm);
      worst = std::max(worst, std::abs(ud - op));
    }
    c.require(worst <= 1e-3, label + ": max |d* - ||J||| = " + num(worst));
  }
}

void c12(Criterion& c) {
  for (const auto* cmd : {&kDistanceCmd, &kLimCmd, &kCertifyIdentity, &kCertifyMoebius, &kBlochLog, &kOmCheck,
                          &kAdmissible, &kCertifyNormal}) {
    const CliRun a = cli(*cmd), b = cli(*cmd);
    std::string line;
    for (const auto& s : *cmd) line += s + " ";
    c.require(!a.out.empty() && a.out == b.out && a.code == b.code, "byte-identical: " + line);
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"1 hyperbolic geodesic recovery", c1},
      {"2 optimizer vs grid oracle", c2},
      {"3 limit ratio at 0.3 e1", c3},
      {"4 identity certification", c4},
      {"5 Moebius automorphism", c5},
      {"6 unattained supremum", c6},
      {"7 square-root mean inequality", c7},
      {"8 admissibility checks", c8},
      {"9 min/max vs geometric mean", c9},
      {"10 normal map", c10},
      {"11 upper derivative vs Jacobian norm", c11},
      {"12 determinism", c12},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    std::ostringstream log;
    Criterion c(log);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.pass() ? "PASS " : "FAIL ") << name << " (" << num(seconds_since(t0)) << " s)\n"
              << log.str() << std::flush;
    if (!c.pass()) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
