#include "blochcert/corpus.hpp"
#include "blochcert/errors.hpp"
#include "blochcert/sampling.hpp"
#include "blochcert/seminorms.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace blochcert;
using testing_support::vec;

namespace {

double eval(const AdmissibleFn& psi, const MappingUnderTest& f, const Vector& x, const Vector& y) {
  const Vector fx = f(x), fy = f(y);
  return psi(PairContext{x, y, fx, fy});
}

double eval_identity(const AdmissibleFn& psi, const Vector& x, const Vector& y) {
  return psi(PairContext{x, y, x, y});
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

}  // namespace

TEST_CASE("admissible constructors") {
  const AdmissibleFn gm = admissible::geometric_mean_phi(OMFunction::artanh());
  CHECK(eval_identity(gm, vec({0, 0}), vec({0, 0})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_identity(gm, vec({0.6, 0}), vec({0, 0.3})) ==
        doctest::Approx(std::sqrt((1 - 0.36) * (1 - 0.09))).epsilon(1e-12));
  const AdmissibleFn h = admissible::hyperbolic();
  CHECK(eval_identity(h, vec({0.6, 0}), vec({0, 0.8})) == doctest::Approx(0.8 * 0.6).epsilon(1e-14));
  CHECK_FALSE(h.requires_mapping());
  const AdmissibleFn sn = admissible::spherical_normal();
  CHECK(sn.requires_mapping());
  const Vector x = vec({0.5, 0}), fx = vec({2, 0});
  CHECK(sn(PairContext{x, x, fx, fx}) == doctest::Approx(0.75 / 5.0).epsilon(1e-14));

  const AdmissibleFn mm = admissible::minmax(Weight::hyperbolic(), Weight::constant_one());
  CHECK(eval_identity(mm, vec({0.6, 0}), vec({0, 0.3})) == doctest::Approx(0.64).epsilon(1e-14));

  CHECK(parse_admissible("hyperbolic", Weight::hyperbolic(), Weight::constant_one()).label() == "hyperbolic");
  CHECK(parse_admissible("sym:scale:2:hyperbolic", Weight::hyperbolic(), Weight::constant_one()).label() ==
        "sym:scale:2:hyperbolic");
  CHECK_THROWS_AS(parse_admissible("nope", Weight::hyperbolic(), Weight::constant_one()), InvalidArgument);
  CHECK_THROWS_AS(parse_admissible("scale:-1:hyperbolic", Weight::hyperbolic(), Weight::constant_one()),
                  InvalidArgument);
}

TEST_CASE("ratio admissible function against closed forms") {
  const AdmissibleFn flat = admissible::ratio(Weight::constant_one(), Weight::constant_one(), GeodesicConfig{});
  CHECK(eval_identity(flat, vec({0.1, 0.2}), vec({-0.4, 0.3})) == doctest::Approx(1.0).epsilon(1e-12));
  const AdmissibleFn r = admissible::ratio(Weight::hyperbolic(), Weight::constant_one(), GeodesicConfig{});
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Vector x = testing_support::random_in_ball(rng, 2, 0.8);
    const Vector y = testing_support::random_in_ball(rng, 2, 0.8);
    const double expected = (x - y).norm() / hyperbolic_distance(x, y);
    CHECK(eval_identity(r, x, y) == doctest::Approx(expected).epsilon(1e-4));
    CHECK(eval_identity(r, x, y) == eval_identity(r, y, x));
  }
  CHECK(eval_identity(r, vec({0.5, 0}), vec({0.5, 0})) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("min-max is dominated by the geometric mean") {
  const OMFunction phi = OMFunction::artanh();
  const AdmissibleFn mm = admissible::minmax(Weight::phi_prime(phi), Weight::constant_one());
  const AdmissibleFn gm = admissible::geometric_mean_phi(phi);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = testing_support::random_in_ball(rng, 2, 0.95);
    const Vector y = testing_support::random_in_ball(rng, 2, 0.95);
    CHECK(eval_identity(mm, x, y) <= eval_identity(gm, x, y) * (1 + 1e-15));
  }
}

TEST_CASE("symmetrize") {
  std::mt19937_64 rng(4);
  const AdmissibleFn h = admissible::hyperbolic();
  const AdmissibleFn sh = symmetrize(h);
  const AdmissibleFn toy(
      [](const PairContext& c) { return (1 - c.x.squaredNorm()) * (1.5 + c.y[0]); }, "toy", false);
  const AdmissibleFn st = symmetrize(toy);
  const AdmissibleFn sst = symmetrize(st);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = testing_support::random_in_ball(rng, 2, 0.9);
    const Vector y = testing_support::random_in_ball(rng, 2, 0.9);
    CHECK(eval_identity(sh, x, y) == eval_identity(h, x, y));
    const double expected = std::max((1 - x.squaredNorm()) * (1.5 + y[0]), (1 - y.squaredNorm()) * (1.5 + x[0]));
    CHECK(eval_identity(st, x, y) == expected);
    CHECK(eval_identity(st, y, x) == expected);
    CHECK(eval_identity(sst, x, y) == eval_identity(st, x, y));
  }
  CHECK(st.label() == "sym:toy");
}

TEST_CASE("constructed admissible functions are symmetric and match the diagonal") {
  std::mt19937_64 rng(21);
  const GeodesicConfig geo;
  for (const auto& label : corpus_list()) {
    const auto s = setup(label);
    std::vector<AdmissibleFn> fns{s.psi, admissible::minmax(s.omega, s.co_omega)};
    if (s.omega.label() == "hyperbolic" && s.co_omega.is_constant_one()) {
      fns.push_back(admissible::geometric_mean_phi(OMFunction::artanh()));
      fns.push_back(admissible::hyperbolic());
    }
    for (const auto& psi : fns) {
      for (int k = 0; k < 100; ++k) {
        const Vector x = testing_support::random_in_ball(rng, s.entry.mapping.dim, 0.9);
        const Vector y = testing_support::random_in_ball(rng, s.entry.mapping.dim, 0.9);
        const double a = eval(psi, s.entry.mapping, x, y), b = eval(psi, s.entry.mapping, y, x);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
        const double diag = s.co_omega(s.entry.mapping(x)) / s.omega(x);
        CHECK(std::abs(eval(psi, s.entry.mapping, x, x) - diag) <= 1e-12 * std::max(1.0, diag));
      }
    }
    const AdmissibleFn r = admissible::ratio(s.omega, s.co_omega, geo);
    for (int k = 0; k < 3; ++k) {
      const Vector x = testing_support::random_in_ball(rng, s.entry.mapping.dim, 0.8);
      const Vector y = testing_support::random_in_ball(rng, s.entry.mapping.dim, 0.8);
      CHECK(eval(r, s.entry.mapping, x, y) == eval(r, s.entry.mapping, y, x));
      const double diag = s.co_omega(s.entry.mapping(x)) / s.omega(x);
      CHECK(std::abs(eval(r, s.entry.mapping, x, x) - diag) <= 1e-12 * std::max(1.0, diag));
    }
  }
}

TEST_CASE("bloch number examples") {
  const auto id = setup("identity_disk");
  const BlochEstimate b = bloch_number(id.entry.mapping, id.omega, id.co_omega);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.argmax.norm() <= 1e-3);
  CHECK(b.shells.size() == 3);
  const auto c = setup("constant");
  CHECK(bloch_number(c.entry.mapping, c.omega, c.co_omega).value == 0.0);
  const auto lb = setup("log_bloch");
  const BlochEstimate l = bloch_number(lb.entry.mapping, lb.omega, lb.co_omega);
  CHECK(l.value >= 1.90);
  CHECK(l.value <= 2.00);
  REQUIRE(l.shells.size() == 3);
  CHECK(l.shells[0].value < l.shells[1].value);
  CHECK(l.shells[1].value < l.shells[2].value);
  SupremumConfig bad;
  bad.interior_samples = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = {};
  bad.shell_deltas = {-1.0};
  CHECK_THROWS_AS(bloch_number(id.entry.mapping, id.omega, id.co_omega, bad), InvalidArgument);
}

TEST_CASE("lipschitz number examples") {
  const auto id = setup("identity_disk");
  const LipschitzEstimate l = lipschitz_number(id.entry.mapping, admissible::hyperbolic());
  CHECK(l.value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(l.value <= 1.0);
  CHECK(l.x != l.y);
  const auto c = setup("constant");
  CHECK(lipschitz_number(c.entry.mapping, c.psi).value == 0.0);
  const auto m = setup("moebius_a0.5");
  CHECK(std::abs(lipschitz_number(m.entry.mapping, admissible::hyperbolic()).value - 1.0) <= 0.02);
}

TEST_CASE("admissibility checks") {
  const auto id = setup("identity_disk");
  AdmissibilityConfig cfg;
  cfg.pairs = 1000;
  const auto good = check_admissible(admissible::hyperbolic(), id.entry.mapping, id.omega, id.co_omega, cfg);
  CHECK(good.pass);
  CHECK(good.distance_source == "closed_form");
  REQUIRE(good.conditions.size() == 4);
  CHECK(good.conditions[0].name == "symmetry");
  CHECK(good.conditions[1].name == "diagonal");
  CHECK(good.conditions[2].name == "liminf");
  CHECK(good.conditions[2].one_sided);
  CHECK(good.conditions[3].name == "distance_simplified");
  CHECK(good.conditions[3].checked == 1000);
  CHECK(good.conditions[3].worst_slack >= -1e-12);

  const auto broken =
      check_admissible(scale(admissible::hyperbolic(), 2.0), id.entry.mapping, id.omega, id.co_omega, cfg);
  CHECK_FALSE(broken.pass);
  CHECK_FALSE(broken.conditions[3].pass);
  CHECK_FALSE(broken.conditions[3].witnesses.empty());
  for (const Witness& w : broken.conditions[3].witnesses) CHECK(w.slack < 0.0);

  AdmissibilityConfig numeric;
  numeric.pairs = 24;
  numeric.limit_points = 8;
  const OMFunction phi = OMFunction::artanh();
  const auto gm = check_admissible(admissible::geometric_mean_phi(phi), id.entry.mapping, Weight::phi_prime(phi),
                                   Weight::constant_one(), numeric);
  CHECK(gm.pass);
  CHECK(gm.distance_source == "numerical");
  CHECK(gm.budget > 0.0);

  const auto np = setup("normal_pole");
  AdmissibilityConfig general;
  general.pairs = 12;
  general.limit_points = 6;
  const auto normal = check_admissible(np.psi, np.entry.mapping, np.omega, np.co_omega, general);
  CHECK(normal.conditions[3].name == "distance");
  CHECK(normal.conditions[0].pass);
  CHECK(normal.conditions[1].pass);
}

TEST_CASE("certification examples") {
  for (const char* label : {"identity_disk", "constant", "moebius_a0.5"}) {
    const auto s = setup(label);
    const EqualityCertificate c = certify_equality(s.entry.mapping, s.omega, s.co_omega, s.psi);
    CAPTURE(label);
    CHECK(c.pass);
    CHECK(c.tolerance == 0.02);
    CHECK(c.relative_gap == relative_gap(c.bloch_estimate, c.lipschitz_estimate));
    CHECK(c.relative_gap <= c.tolerance);
    CHECK_FALSE(c.admissibility_waived);
    REQUIRE(c.admissibility);
    CHECK(c.admissibility->pass);
  }
  const auto s = setup("identity_disk");
  CertifyOptions waive;
  waive.waive_admissibility = true;
  waive.tolerance = 1e-9;
  const EqualityCertificate c = certify_equality(s.entry.mapping, s.omega, s.co_omega, s.psi, {}, waive);
  CHECK(c.admissibility_waived);
  CHECK_FALSE(c.admissibility);
  CHECK(c.pass == (c.relative_gap <= 1e-9));
  CHECK(relative_gap(0.0, 0.0) == 0.0);
  CHECK(relative_gap(1.0, 2.0) == 0.5);
}

TEST_CASE("lipschitz estimates never exceed bloch estimates beyond the tolerance") {
  for (const auto& label : corpus_list()) {
    const auto s = setup(label);
    const EqualityCertificate c = certify_equality(s.entry.mapping, s.omega, s.co_omega, s.psi);
    CAPTURE(label);
    CHECK(c.lipschitz_estimate <= c.bloch_estimate * (1 + c.tolerance) + 1e-12);
    CHECK(c.pass);
  }
}

TEST_CASE("near-diagonal pairs around the bloch argmax recover the integrand") {
  SupremumConfig cfg;
  cfg.shell_deltas = {1e-2};
  for (const auto& label : corpus_list()) {
    const auto s = setup(label);
    const auto& f = s.entry.mapping;
    const BlochEstimate b = bloch_number(f, s.omega, s.co_omega, cfg);
    const Vector& x = b.argmax;
    // Top right singular vector of the exact Jacobian is the direction of largest stretch.
    Eigen::JacobiSVD<Matrix> svd(jacobian_at(f, x), Eigen::ComputeFullV);
    const Vector u = svd.matrixV().col(0);
    const double h = 1e-4;
    const Vector p = x - 0.5 * h * u, q = x + 0.5 * h * u;
    const double ratio = lipschitz_ratio(f, s.psi, p, q);
    const double integrand = bloch_integrand(f, s.omega, s.co_omega, x);
    CAPTURE(label);
    CHECK(integrand == doctest::Approx(b.value).epsilon(1e-12));
    CHECK(std::abs(ratio - integrand) <= 0.01 * integrand + 1e-12);
  }
}

TEST_CASE("positive scaling of the co-weight scales estimates and keeps argmax points") {
  for (const char* label : {"identity_disk", "moebius_a0.5", "log_bloch"}) {
    const auto s = setup(label);
    const BlochEstimate b = bloch_number(s.entry.mapping, s.omega, s.co_omega);
    const LipschitzEstimate l =
        lipschitz_number(s.entry.mapping, admissible::minmax(s.omega, s.co_omega));
    for (const double c : {2.0, 0.5}) {
      const Weight scaled = Weight::scaled(s.co_omega, c);
      const BlochEstimate bc = bloch_number(s.entry.mapping, s.omega, scaled);
      const LipschitzEstimate lc = lipschitz_number(s.entry.mapping, admissible::minmax(s.omega, scaled));
      CAPTURE(label);
      CAPTURE(c);
      CHECK(bc.value == doctest::Approx(c * b.value).epsilon(1e-14));
      CHECK(bc.argmax == b.argmax);
      CHECK(lc.value == doctest::Approx(c * l.value).epsilon(1e-14));
      CHECK(lc.x == l.x);
      CHECK(lc.y == l.y);
    }
  }
}

TEST_CASE("min-max and geometric-mean certify against the same bloch number") {
  const OMFunction phi = OMFunction::artanh();
  for (const char* label : {"identity_disk", "moebius_a0.5"}) {
    const auto s = setup(label);
    CertifyOptions opts;
    opts.tolerance = 0.03;
    const auto mm = certify_equality(s.entry.mapping, s.omega, s.co_omega, admissible::minmax(s.omega, s.co_omega),
                                     {}, opts);
    const auto gm =
        certify_equality(s.entry.mapping, s.omega, s.co_omega, admissible::geometric_mean_phi(phi), {}, opts);
    CAPTURE(label);
    CHECK(mm.pass);
    CHECK(gm.pass);
    CHECK(mm.bloch_estimate == gm.bloch_estimate);
  }
}

TEST_CASE("estimates are deterministic for a fixed seed") {
  const auto s = setup("moebius_a0.5");
  const auto a = certify_equality(s.entry.mapping, s.omega, s.co_omega, s.psi);
  const auto b = certify_equality(s.entry.mapping, s.omega, s.co_omega, s.psi);
  CHECK(a.bloch_estimate == b.bloch_estimate);
  CHECK(a.lipschitz_estimate == b.lipschitz_estimate);
  CHECK(a.argmax_point == b.argmax_point);
}
