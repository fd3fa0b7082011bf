#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace collapse {

/// Seeded random stream owned by one trajectory.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the standard).
/// Uniforms take the top 53 bits of one engine draw. Normals come from
/// Boost.Random's ziggurat sampler, whose algorithm is fixed across Boost
/// releases, unlike the implementation-defined std::normal_distribution.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Exponential with the given rate (mean 1/rate). rate must be > 0.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  boost::random::normal_distribution<double> normal_;
};

/// Seed of trajectory `index` under `master_seed`: the first 8 bytes
/// (little-endian) of SHA-256 over the 16-byte message
/// le64(master_seed) || le64(index).
std::uint64_t derive_trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace collapse
