#pragma once

// Seeded randomness. Every stochastic choice in the toolkit flows through one
// Rng instance so that runs are reproducible from a single seed.

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "ontoscope/quantum.hpp"

namespace ontoscope {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::mt19937_64& engine() { return engine_; }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  // Uniform direction on the unit sphere.
  Eigen::Vector3d unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * M_PI);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  // Haar-uniform pure qubit state.
  QuantumState haar_qubit() { return state_from_bloch(unit_vector()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ontoscope
