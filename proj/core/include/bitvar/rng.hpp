#pragma once

#include <cstdint>
#include <random>

namespace bitvar {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for replication `rep` of (model, T) under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t model_index,
                          std::uint64_t sample_count,
                          std::uint64_t replication) noexcept;

/// Portable Gaussian source: std::mt19937_64 (bit-exact across standard
/// libraries) with uniform conversion and Box-Muller done here, since the
/// standard distributions are implementation-defined.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Uniform on (0, 1].
  double uniform() noexcept;
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace bitvar
