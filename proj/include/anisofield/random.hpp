#pragma once

#include <array>
#include <cstdint>

namespace anisofield {

/// Philox4x32-10 counter-based generator. A draw is a pure function of
/// (key, stream, index), so any subset of variates can be produced in any
/// order or on any thread with identical results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }

  std::array<std::uint32_t, 4> block(std::uint64_t stream, std::uint64_t index) const;

  /// Two uniforms in the open interval (0, 1).
  std::array<double, 2> uniform2(std::uint64_t stream, std::uint64_t index) const;

  /// Two independent standard normals (Box-Muller on one block).
  std::array<double, 2> normal2(std::uint64_t stream, std::uint64_t index) const;

  /// Raw Philox4x32-10 bijection, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> counter,
                                             std::array<std::uint32_t, 2> key);

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent sub-seed for a (seed, label) pair.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace anisofield
