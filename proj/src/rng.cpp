#include "jlopt/rng.hpp"

#include <cmath>

namespace jlopt {

Xoshiro256::Xoshiro256(Seed seed) noexcept {
  std::uint64_t state = seed.value;
  for (auto& word : s_) {
    state += 0x9E3779B97F4A7C15ULL;
    word = mix64(state);
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

namespace {

constexpr int kLayers = 256;
constexpr double kTailStart = 3.6541528853610088;
constexpr double kLayerArea = 4.92867323399e-3;
constexpr double kScale = 0x1.0p53;

struct ZigguratTables {
  std::array<std::uint64_t, kLayers> k{};
  std::array<double, kLayers> w{};
  std::array<double, kLayers> f{};

  ZigguratTables() {
    double dn = kTailStart;
    double tn = dn;
    const double q = kLayerArea / std::exp(-0.5 * dn * dn);
    k[0] = static_cast<std::uint64_t>((dn / q) * kScale);
    k[1] = 0;
    w[0] = q / kScale;
    w[kLayers - 1] = dn / kScale;
    f[0] = 1.0;
    f[kLayers - 1] = std::exp(-0.5 * dn * dn);
    for (int i = kLayers - 2; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(kLayerArea / dn + std::exp(-0.5 * dn * dn)));
      k[i + 1] = static_cast<std::uint64_t>((dn / tn) * kScale);
      tn = dn;
      f[i] = std::exp(-0.5 * dn * dn);
      w[i] = dn / kScale;
    }
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

}  // namespace

double NormalSampler::operator()() noexcept {
  const auto& t = tables();
  const std::uint64_t bits = engine_();
  const unsigned layer = bits & 0xFF;
  const std::uint64_t mag = bits >> 11;
  if (mag < t.k[layer]) {
    const double x = static_cast<double>(mag) * t.w[layer];
    return (bits & 0x100) ? -x : x;
  }
  return slow_path(bits);
}

double NormalSampler::slow_path(std::uint64_t bits) noexcept {
  const auto& t = tables();
  for (;;) {
    const unsigned layer = bits & 0xFF;
    const bool negative = bits & 0x100;
    const std::uint64_t mag = bits >> 11;
    if (mag < t.k[layer]) {
      const double x = static_cast<double>(mag) * t.w[layer];
      return negative ? -x : x;
    }
    if (layer == 0) {
      // Base strip: sample the tail beyond kTailStart by Marsaglia's method.
      double x = 0.0;
      double y = 0.0;
      do {
        x = -std::log(engine_.uniform_open0()) / kTailStart;
        y = -std::log(engine_.uniform_open0());
      } while (y + y < x * x);
      return negative ? -(kTailStart + x) : kTailStart + x;
    }
    const double x = static_cast<double>(mag) * t.w[layer];
    if (t.f[layer] + engine_.uniform() * (t.f[layer - 1] - t.f[layer]) <
        std::exp(-0.5 * x * x)) {
      return negative ? -x : x;
    }
    bits = engine_();
  }
}

}  // namespace jlopt
