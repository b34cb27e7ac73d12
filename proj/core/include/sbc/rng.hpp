#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace sbc {

// Mixes (master seed, stream index) into an independent 64-bit seed
// (splitmix64 finalizer over both words).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_index);

// Seedable generator with a portable output stream.
//
// std::mt19937_64 is fully specified by the standard, but the std::*
// distributions are not, so uniform and normal variates are produced here
// from raw engine words. Equal seeds give equal streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller; caches the second variate.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace sbc
