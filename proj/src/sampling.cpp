#include "blochcert/sampling.hpp"

#include "blochcert/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace blochcert {

namespace {

constexpr std::array<int, 32> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23,  29,  31,
                                         37, 41, 43, 47, 53, 59, 61, 67, 71,  73,  79,
                                         83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::size_t kRejectionCap = 1000;

}  // namespace

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) : dim_(dim), shift_(dim) {
  if (dim < 1 || dim > static_cast<int>(kPrimes.size())) {
    throw InvalidArgument("HaltonSequence supports 1..32 dimensions");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < dim; ++k) shift_[k] = unit(rng);
}

Vector HaltonSequence::next() {
  Vector p(dim_);
  for (int k = 0; k < dim_; ++k) {
    double v = radical_inverse(index_, kPrimes[k]) + shift_[k];
    p[k] = v - std::floor(v);
  }
  ++index_;
  return p;
}

std::vector<Vector> sample_interior(const ConvexDomain& d, Eigen::Index dim, std::size_t count,
                                    double margin, std::uint64_t seed) {
  if (!d.bounded()) throw InvalidArgument("sample_interior: domain is unbounded");
  const auto [lo, hi] = d.bounding_box(dim);
  HaltonSequence seq(static_cast<int>(dim), seed);
  std::vector<Vector> out;
  out.reserve(count);
  std::size_t drawn = 0;
  while (out.size() < count) {
    if (++drawn > kRejectionCap * (count + 1)) {
      throw InvalidArgument("sample_interior: shrunk domain too thin for rejection sampling");
    }
    Vector u = seq.next();
    Vector x = lo.array() + u.array() * (hi - lo).array();
    if (d.depth(x) >= margin) out.push_back(std::move(x));
  }
  return out;
}

std::vector<Vector> sample_shell(const ConvexDomain& d, Eigen::Index dim, std::size_t count,
                                 double margin, std::uint64_t seed) {
  if (!d.bounded()) throw InvalidArgument("sample_shell: domain is unbounded");
  const Vector c = d.center(dim);
  std::vector<Vector> out;
  out.reserve(count);
  for (const Vector& u : quasi_uniform_directions(dim, count, seed)) {
    out.push_back(project(d, c + d.ray_exit(u, margin) * u, margin));
  }
  return out;
}

std::vector<Vector> quasi_uniform_directions(Eigen::Index dim, std::size_t count,
                                             std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("quasi_uniform_directions: dim must be positive");
  std::vector<Vector> out;
  out.reserve(count);
  if (dim == 1) {
    for (std::size_t k = 0; k < count; ++k) out.push_back(Vector::Constant(1, k % 2 ? -1.0 : 1.0));
    return out;
  }
  if (dim == 2) {
    std::mt19937_64 rng(seed);
    const double offset = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * (static_cast<double>(k) + offset) / static_cast<double>(count);
      Vector u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(std::move(u));
    }
    return out;
  }
  for (Eigen::Index i = 0; i < dim && out.size() < count; ++i) {
    for (double s : {1.0, -1.0}) {
      if (out.size() == count) break;
      Vector e = Vector::Zero(dim);
      e[i] = s;
      out.push_back(std::move(e));
    }
  }
  HaltonSequence seq(static_cast<int>(dim), seed);
  while (out.size() < count) {
    Vector p = 2.0 * seq.next().array() - 1.0;
    const double n = p.norm();
    if (n > 1.0 || n < 1e-3) continue;
    out.push_back(p / n);
  }
  return out;
}

}  // namespace blochcert
