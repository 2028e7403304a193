#pragma once

#include <cstdint>

namespace prbox {

/// SplitMix64 (Steele, Lea, Flood). One instance per trial.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  constexpr double uniform_open01() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// seed_i = mix(master XOR mix(index + 0xD1B54A32D192ED03)).
constexpr std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return SplitMix64::mix(master ^ SplitMix64::mix(index + 0xD1B54A32D192ED03ULL));
}

}  // namespace prbox
