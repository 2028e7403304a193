#pragma once

// Seeded trial engine for the rubber band in a tube.
//
// Band coordinates run from Alice's grip (0) to Bob's grip (L). A break at p
// leaves Alice holding p and Bob holding L - p. Tube coordinates are the band
// coordinates scaled by D / L.
//
// Randomness: every trial owns one SplitMix64 stream seeded by
// TrialConfig::seed. Draw order is fixed: the color first (top bit of the
// first output), then the break point when both parties pull. Batches derive
// per-trial seeds with derive_trial_seed(master, index).

#include <cstdint>
#include <optional>
#include <variant>

#include "prbox/core.hpp"
#include "prbox/random.hpp"

namespace prbox::rubberband {

using prbox::SplitMix64;
using prbox::derive_trial_seed;

template <typename T>
struct PerParty {
  T alice{};
  T bob{};

  constexpr T& operator[](Party party) noexcept { return party == Party::Alice ? alice : bob; }
  constexpr const T& operator[](Party party) const noexcept {
    return party == Party::Alice ? alice : bob;
  }
  friend constexpr bool operator==(const PerParty&, const PerParty&) = default;
};

struct BandGeometry {
  double unstretched_length = 1.0;
  double tube_span = 1.0;

  /// Throws std::invalid_argument unless L > 0, D > 0 and D >= L.
  void validate() const;
  friend constexpr bool operator==(const BandGeometry&, const BandGeometry&) = default;
};

struct BandSpec {
  BandGeometry geometry;
  Color color = Color::Red;
  friend constexpr bool operator==(const BandSpec&, const BandSpec&) = default;
};

struct Intact {
  friend constexpr bool operator==(Intact, Intact) noexcept { return true; }
};
struct Broken {
  double break_point = 0.0;
  friend constexpr bool operator==(const Broken&, const Broken&) = default;
};
struct Sucked {
  friend constexpr bool operator==(Sucked, Sucked) noexcept { return true; }
};

using BandState = std::variant<Intact, Broken, Sucked>;

struct TimingParams {
  double tick_duration = 1.0;
  int count_ticks = 3;
  double retraction_speed = 1.0;
  double signal_speed = 1.0;

  /// Throws std::invalid_argument on non-positive values, count_ticks != 3
  /// or retraction_speed > signal_speed.
  void validate() const;

  double pull_time() const noexcept { return count_ticks * tick_duration; }
  /// Time for a signal at signal_speed to cover half the tube.
  double photon_arm_time(double tube_span) const noexcept {
    return (tube_span / 2.0) / signal_speed;
  }
};

struct TrialConfig {
  Bit x;
  Bit y;
  std::uint64_t seed = 0;
  std::optional<BandGeometry> band_overrides;

  BandGeometry geometry() const { return band_overrides.value_or(BandGeometry{}); }
};

struct TrialRecord {
  InputPair inputs;
  Color color = Color::Red;
  BandGeometry geometry;
  PerParty<bool> pulled;
  BandState band_final;
  PerParty<std::optional<Bit>> l;
  PerParty<Bit> c;
  OutputPair outputs;
  PerParty<std::optional<double>> piece_length;
  PerParty<double> completion_ticks;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct PullResolution {
  BandState state;
  PerParty<std::optional<double>> piece_length;
};

/// Break points within this fraction of L from L / 2 are redrawn.
inline constexpr double kMidpointExclusion = 0x1.0p-40;

BandSpec sample_band(SplitMix64& rng, const BandGeometry& geometry);

/// True for 0 < p < L with |p - L/2| > 2^-40 L.
bool is_admissible_break_point(double p, double unstretched_length) noexcept;

/// Uniform on (0, L), resampled until admissible.
double sample_break_point(SplitMix64& rng, double unstretched_length);

PullResolution resolve_pulls(Bit x, Bit y, const BandSpec& band, SplitMix64& rng);

/// Throws std::domain_error for lengths outside (0, L] or exactly L / 2.
Bit length_to_l(double piece_length, double unstretched_length);

/// Input 0 reports the color bit, input 1 reports xnor(l, c).
/// Throws std::invalid_argument when input is 1 and l is absent.
Bit local_output(Bit input, Bit c, std::optional<Bit> l);

/// Tube distance each piece travels back to its holder: D * (piece / L).
/// Empty for parties that did not pull.
PerParty<std::optional<double>> retraction_distances(const TrialRecord& record);

/// Input-0 parties finish at 0; pullers finish at
/// count_ticks * tick + retraction distance / v.
PerParty<double> completion_time(const TrialRecord& record, const TimingParams& timing);

TrialRecord run_trial(const TrialConfig& config, const TimingParams& timing);

/// Batch layout: trial `index` uses setting kAllSettings[index % 4] and seed
/// derive_trial_seed(master, index).
TrialConfig batch_trial_config(std::uint64_t master_seed, std::uint64_t index,
                               std::optional<BandGeometry> overrides = std::nullopt);

}  // namespace prbox::rubberband
