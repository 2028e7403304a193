#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "prbox/core.hpp"

namespace prbox::stats {

/// Outcome counts indexed [x][y][a][b], flattened as x*8 + y*4 + a*2 + b.
struct JointCounts {
  std::array<std::uint64_t, 16> counts{};
  std::array<std::uint64_t, 4> trials_per_setting{};

  void add(InputPair inputs, OutputPair outputs) noexcept;
  std::uint64_t count(Bit x, Bit y, Bit a, Bit b) const noexcept;
  std::uint64_t trials(Bit x, Bit y) const noexcept;
  std::uint64_t total() const noexcept;

  JointCounts& operator+=(const JointCounts& other) noexcept;
  friend bool operator==(const JointCounts&, const JointCounts&) = default;
};

/// Conditional table P(a, b | x, y), same flattening as JointCounts.
struct Behavior {
  std::array<double, 16> p{};

  double& at(Bit x, Bit y, Bit a, Bit b) noexcept;
  double at(Bit x, Bit y, Bit a, Bit b) const noexcept;

  /// Entries in [0, 1] and each setting's slice sums to 1 within `tolerance`.
  bool is_valid(double tolerance = 1e-12) const noexcept;

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

/// Throws std::invalid_argument if any setting has no trials.
Behavior behavior_from_counts(const JointCounts& counts);

/// lambda * first + (1 - lambda) * second.
Behavior mix(const Behavior& first, const Behavior& second, double lambda);

/// E(x, y) = P(a = b | x, y) - P(a != b | x, y), taken relative to the
/// slice total so an all-agree slice gives exactly 1.
double correlator(const Behavior& behavior, Bit x, Bit y);

/// S = E(0,0) + E(0,1) + E(1,0) - E(1,1).
double chsh(const Behavior& behavior);

/// P(party outputs 1 | x, y).
double marginal(const Behavior& behavior, Party party, Bit x, Bit y);
/// Throws std::invalid_argument if the setting has no trials.
double marginal(const JointCounts& counts, Party party, Bit x, Bit y);

/// Largest total-variation distance, over the receiver's own input, between
/// its outcome marginals under the other party's two inputs.
double signaling_tv(const Behavior& behavior, Party receiver);

/// Plug-in I(sender input ; receiver outcome | receiver input) in bits.
/// Inputs are weighted by their trial counts. Plug-in bias is roughly
/// 1 / (2 N ln 2) bits per receiver input. Throws std::invalid_argument if
/// any setting has no trials.
double mutual_information_leak(const JointCounts& counts, Party receiver);
/// Same functional for an exact behavior with uniformly chosen inputs.
double mutual_information_leak(const Behavior& behavior, Party receiver);

/// Kolmogorov-Smirnov statistic of `samples` against Uniform(lo, hi).
/// Throws std::invalid_argument for fewer than two samples or lo >= hi.
double ks_uniform(std::span<const double> samples, double lo, double hi);

/// Asymptotic 5% critical value 1.36 / sqrt(n).
double ks_critical_value_5pct(std::size_t n);

}  // namespace prbox::stats
