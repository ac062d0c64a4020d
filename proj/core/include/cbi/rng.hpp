#pragma once

#include <array>
#include <cstdint>

namespace cbi {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Stateless stream: every draw is a pure function of (seed, path, channel,
/// index), so paths do not depend on generation order or thread count.
/// Channel is 16 bits, index 48 bits.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t path) : seed_(seed), path_(path) {}

  /// Four independent uniforms in (0, 1) with 32-bit resolution.
  std::array<double, 4> uniforms(std::uint32_t channel, std::uint64_t index) const;
  /// Two independent standard normals (Box-Muller on one block).
  std::array<double, 2> normals(std::uint32_t channel, std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t path_;
};

}  // namespace cbi
