#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace jlopt {

// Root of every random stream. Streams are derived purely from (seed, index)
// so results never depend on thread count or evaluation order.
struct Seed {
  std::uint64_t value = 0;

  constexpr bool operator==(const Seed&) const = default;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// child(seed, index) = mix64(mix64(seed) + 0x9E3779B97F4A7C15 * (index + 1)),
// all arithmetic modulo 2^64.
constexpr Seed child(Seed seed, std::uint64_t index) noexcept {
  return Seed{mix64(mix64(seed.value) + 0x9E3779B97F4A7C15ULL * (index + 1))};
}

// xoshiro256** seeded by four SplitMix64 steps from the seed value.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(Seed seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0, 1]: (top 53 bits + 1) * 2^-53. Never returns 0.
  double uniform_open0() noexcept {
    return static_cast<double>((operator()() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(operator()() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

// Name recorded in file headers so readers know how gaussian data was drawn.
inline constexpr const char* kGaussianMethod = "ziggurat256-xoshiro256ss";

// Standard normal sampler: 256-layer Marsaglia-Tsang ziggurat driven by one
// 64-bit draw per attempt (low 8 bits pick the layer, bit 8 the sign, the top
// 53 bits the magnitude). Tables are built once from exp/log/sqrt only.
class NormalSampler {
 public:
  explicit NormalSampler(Seed seed) noexcept : engine_(seed) {}

  double operator()() noexcept;

  void fill(std::span<double> out) noexcept {
    for (double& v : out) v = operator()();
  }

  Xoshiro256& engine() noexcept { return engine_; }

 private:
  double slow_path(std::uint64_t bits) noexcept;

  Xoshiro256 engine_;
};

}  // namespace jlopt
