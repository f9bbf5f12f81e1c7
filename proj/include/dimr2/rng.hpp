#pragma once

#include <cstdint>
#include <random>

namespace dimr2 {

/// SplitMix64 finalizer. Used to derive independent sub-stream seeds so that
/// toggling one generator knob never reshuffles unrelated draws.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for a named sub-stream of `seed`.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag);

/// Mix a double-valued grid coordinate into a seed (by bit pattern), so a
/// grid cell keeps its seed when the surrounding grid changes.
std::uint64_t mix_value(std::uint64_t seed, double value);

/// Deterministic random source: std::mt19937_64 plus fixed floating-point
/// draw rules (53-bit uniforms, Box-Muller normals), so equal seeds give
/// bit-identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53 significant bits.
  double uniform01();

  /// Uniform in [-1, 1).
  double uniform_pm1();

  /// Standard normal via Box-Muller (two uniforms per draw, no caching).
  double normal();

  /// Uniform integer in [0, n); unbiased via rejection.
  std::size_t uniform_index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dimr2
