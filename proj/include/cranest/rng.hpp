#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace cranest {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key of an independent stream derived from a parent key and a tag.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag) {
  return mix64(mix64(parent ^ 0x6a09e667f3bcc909ULL) + mix64(tag + 0x9e3779b97f4a7c15ULL));
}

/// Counter-based stream: draw n is mix64(key + (n + 1) * golden). Two streams
/// with different keys never share state, so parallel work that derives its
/// keys from (seed, trial, ...) is reproducible regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on (0, 1].
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Lemire's rejection keeps the draw unbiased.
    while (true) {
      const std::uint64_t x = next_u64();
      const unsigned __int128 prod = static_cast<unsigned __int128>(x) * n;
      const auto low = static_cast<std::uint64_t>(prod);
      if (low >= n || low >= (0 - n) % n) return static_cast<std::uint64_t>(prod >> 64);
    }
  }

  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance (Box-Muller).
  std::complex<double> complex_normal(double variance = 1.0) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-variance * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  RngStream substream(std::uint64_t tag) const { return RngStream(derive_key(key_, tag)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cranest
