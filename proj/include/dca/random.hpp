#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace dca {

/// Name of the generator recorded in experiment metadata.
inline constexpr std::string_view kGeneratorName = "mt19937_64+box_muller";

/// Seeded source of uniform and standard-normal variates.
///
/// The bit stream comes from std::mt19937_64, whose output sequence is fixed by
/// the C++ standard. Uniforms take the top 53 bits; normals use the Box-Muller
/// transform. Neither step goes through std::*_distribution, whose algorithms
/// are implementation-defined, so streams are reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Matrix of i.i.d. standard normals, filled in row-major order.
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes a base seed with a sequence of stream identifiers (splitmix64 chain).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Stable 64-bit FNV-1a hash, used to turn stream labels into identifiers.
std::uint64_t stream_id(std::string_view label);

}  // namespace dca
