#include "blochcert/corpus.hpp"

#include "blochcert/errors.hpp"

#include <cmath>
#include <complex>
#include <functional>

namespace blochcert {

namespace {

using Complex = std::complex<double>;

Complex to_complex(const Vector& x) { return {x[0], x[1]}; }

Vector from_complex(Complex z) {
  Vector v(2);
  v << z.real(), z.imag();
  return v;
}

// Jacobian of a holomorphic map with derivative d, as a map of R^2.
Matrix conformal(Complex d) {
  Matrix J(2, 2);
  J << d.real(), -d.imag(), d.imag(), d.real();
  return J;
}

MappingUnderTest holomorphic(std::string label, std::function<Complex(Complex)> fn,
                             std::function<Complex(Complex)> derivative) {
  MappingUnderTest m;
  m.domain = ConvexDomain::unit_ball();
  m.dim = 2;
  m.codomain_dim = 2;
  m.label = std::move(label);
  m.evaluate = [fn](const Vector& x) { return from_complex(fn(to_complex(x))); };
  m.jacobian = [derivative](const Vector& x) { return conformal(derivative(to_complex(x))); };
  return m;
}

CorpusEntry disk_entry(MappingUnderTest m, std::optional<KnownValue> known, std::string notes = {}) {
  return CorpusEntry{std::move(m), std::move(known), "hyperbolic", "const1", "hyperbolic", std::move(notes)};
}

CorpusEntry identity_disk() {
  return disk_entry(holomorphic("identity_disk", [](Complex z) { return z; }, [](Complex) { return Complex(1.0); }),
                    KnownValue{1.0, "sup of 1 - |z|^2, attained at 0"});
}

CorpusEntry constant() {
  const Complex c(0.3, -0.2);
  return disk_entry(
      holomorphic("constant", [c](Complex) { return c; }, [](Complex) { return Complex(0.0); }),
      KnownValue{0.0, "zero derivative"});
}

CorpusEntry moebius() {
  const Complex a(0.5, 0.0);
  return disk_entry(holomorphic(
                        "moebius_a0.5", [a](Complex z) { return (a - z) / (1.0 - std::conj(a) * z); },
                        [a](Complex z) {
                          const Complex q = 1.0 - std::conj(a) * z;
                          return (std::norm(a) - 1.0) / (q * q);
                        }),
                    KnownValue{1.0, "Schwarz-Pick: (1 - |z|^2)|f'(z)| = 1 - |f(z)|^2, attained where f vanishes"},
                    "disk automorphism with a = 0.5");
}

CorpusEntry log_bloch() {
  return disk_entry(holomorphic(
                        "log_bloch", [](Complex z) { return -std::log(1.0 - z); },
                        [](Complex z) { return 1.0 / (1.0 - z); }),
                    KnownValue{2.0, "(1 - |z|^2)/|1 - z| <= 1 + |z| < 2, approached as z -> 1 along the reals"},
                    "unattained");
}

CorpusEntry normal_pole() {
  CorpusEntry e = disk_entry(
      holomorphic(
          "normal_pole", [](Complex z) { return 1.0 / (1.0 - z); },
          [](Complex z) {
            const Complex q = 1.0 - z;
            return 1.0 / (q * q);
          }),
      KnownValue{(std::sqrt(5.0) - 1.0) / 2.0,
                 "(1 - |z|^2)/(|1 - z|^2 + 1) is maximal on the reals at x = (3 - sqrt5)/2, value (sqrt5 - 1)/2"},
      "spherical co-weight; the integrand is bounded by 1");
  e.coweight = "spherical";
  e.psi = "spherical_normal";
  return e;
}

CorpusEntry linear_rm() {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 2.0, 1.0, 0.5;
  MappingUnderTest m;
  m.domain = ConvexDomain::unit_ball();
  m.dim = 3;
  m.codomain_dim = 3;
  m.label = "linear_Rm";
  m.evaluate = [a](const Vector& x) -> Vector { return a * x; };
  m.jacobian = [a](const Vector&) -> Matrix { return a; };
  return CorpusEntry{std::move(m), KnownValue{2.0, "largest singular value of diag(2, 1, 0.5)"}, "const1", "const1",
                     "minmax", "f(x) = Ax on the unit ball of R^3"};
}

struct Registered {
  const char* label;
  CorpusEntry (*make)();
};

constexpr Registered kRegistry[] = {
    {"identity_disk", identity_disk}, {"constant", constant},       {"moebius_a0.5", moebius},
    {"log_bloch", log_bloch},         {"normal_pole", normal_pole}, {"linear_Rm", linear_rm},
};

}  // namespace

std::vector<std::string> corpus_list() {
  std::vector<std::string> out;
  for (const auto& r : kRegistry) out.emplace_back(r.label);
  return out;
}

CorpusEntry corpus_get(const std::string& label) {
  for (const auto& r : kRegistry) {
    if (label == r.label) return r.make();
  }
  throw InvalidArgument("unknown corpus label '" + label + "'");
}

}  // namespace blochcert
