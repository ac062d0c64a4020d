#include "cbi/rng.hpp"

#include <cmath>
#include <numbers>

namespace cbi {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::array<double, 4> CounterRng::uniforms(std::uint32_t channel, std::uint64_t index) const {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>((index >> 32) & 0xFFFFu) | (channel << 16),
      static_cast<std::uint32_t>(path_),
      static_cast<std::uint32_t>(path_ >> 32),
  };
  const auto bits = philox4x32(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  std::array<double, 4> u{};
  for (int i = 0; i < 4; ++i) u[static_cast<std::size_t>(i)] = (bits[static_cast<std::size_t>(i)] + 0.5) * 0x1p-32;
  return u;
}

std::array<double, 2> CounterRng::normals(std::uint32_t channel, std::uint64_t index) const {
  const auto u = uniforms(channel, index);
  // two 32-bit halves per uniform so the tail reaches ~8.6 sigma
  const double u1 = u[0] + u[1] * 0x1p-32;
  const double u2 = u[2];
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace cbi
