#pragma once

#include "blochcert/geometry.hpp"

#include <cmath>
#include <random>

namespace testing_support {

using blochcert::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Uniform point in the open Euclidean ball of the given radius, by rejection.
inline Vector random_in_ball(std::mt19937_64& rng, Eigen::Index dim, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = u(rng);
    if (v.norm() < 1.0) return radius * v;
  }
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

}  // namespace testing_support
