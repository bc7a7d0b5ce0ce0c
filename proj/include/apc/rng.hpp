#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace apc {

/// Mix a base seed with a list of stream identifiers (trial index, sampler id, ...)
/// into an independent 64-bit seed. Pure integer arithmetic, so derived seeds are
/// identical on every platform and independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

/// Seedable generator used for every random draw in the library.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard. The
/// variate transforms are implemented here rather than taken from <random>
/// because the standard distributions are allowed to differ across library
/// implementations, which would break byte-identical results files.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (the spare variate is cached).
  double normal();

  /// Derive a child generator for an independent sub-stream.
  Rng split(std::uint64_t stream) { return Rng(derive_seed(engine_(), {stream})); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace apc
