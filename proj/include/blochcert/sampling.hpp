#pragma once

#include "blochcert/geometry.hpp"

#include <cstdint>
#include <vector>

namespace blochcert {

// Halton sequence with a seeded Cranley-Patterson rotation. Deterministic for a given
// (dim, seed); supports up to 32 dimensions.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);

  int dim() const noexcept { return dim_; }

  // Next point of the rotated sequence in [0,1)^dim.
  Vector next();

 private:
  int dim_;
  std::uint64_t index_ = 1;
  Vector shift_;
};

// `count` points with depth >= margin, low-discrepancy in the domain's bounding box and
// kept by rejection. Throws InvalidArgument for unbounded domains.
std::vector<Vector> sample_interior(const ConvexDomain& d, Eigen::Index dim, std::size_t count,
                                    double margin, std::uint64_t seed);

// `count` points on the boundary of the margin-shrunk domain, along quasi-uniform rays from
// the domain center.
std::vector<Vector> sample_shell(const ConvexDomain& d, Eigen::Index dim, std::size_t count,
                                 double margin, std::uint64_t seed);

// Quasi-uniform Euclidean unit vectors. In 2D these are equally spaced angles with a seeded
// offset; in higher dimensions they start with +-e_i and continue with radially projected
// low-discrepancy points of the unit ball.
std::vector<Vector> quasi_uniform_directions(Eigen::Index dim, std::size_t count,
                                             std::uint64_t seed);

}  // namespace blochcert
