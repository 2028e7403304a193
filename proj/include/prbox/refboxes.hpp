#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "prbox/core.hpp"
#include "prbox/random.hpp"
#include "prbox/rubberband.hpp"
#include "prbox/stats.hpp"

namespace prbox::refboxes {

using Rational = boost::rational<std::int64_t>;

/// P(a, b | x, y) in exact arithmetic, flattened as x*8 + y*4 + a*2 + b.
struct ExactBehavior {
  std::array<Rational, 16> p{};

  Rational& at(Bit x, Bit y, Bit a, Bit b) noexcept;
  const Rational& at(Bit x, Bit y, Bit a, Bit b) const noexcept;

  bool is_normalized() const;
  /// Each party's marginal is independent of the other party's input.
  bool is_no_signaling() const;
  stats::Behavior to_behavior() const;

  friend bool operator==(const ExactBehavior&, const ExactBehavior&) = default;
};

class Box {
 public:
  virtual ~Box() = default;
  virtual std::string name() const = 0;
  virtual OutputPair sample(Bit x, Bit y, SplitMix64& rng) const = 0;
  /// Closed-form behavior, when the box has one.
  virtual std::optional<ExactBehavior> analytic() const { return std::nullopt; }
};

/// a uniform, b = a XOR (x AND y). One draw per sample (top bit).
OutputPair ideal_pr_sample(Bit x, Bit y, SplitMix64& rng);

class IdealPrBox final : public Box {
 public:
  std::string name() const override { return "ideal-pr"; }
  OutputPair sample(Bit x, Bit y, SplitMix64& rng) const override {
    return ideal_pr_sample(x, y, rng);
  }
  std::optional<ExactBehavior> analytic() const override;
};

/// A pair of deterministic maps Bit -> Bit. Each map is two bits: bit 0 is
/// the output on input 0, bit 1 the output on input 1.
struct LhvStrategy {
  std::uint8_t alice_map = 0;
  std::uint8_t bob_map = 0;

  Bit alice(Bit x) const noexcept { return Bit(((alice_map >> x.index()) & 1U) != 0); }
  Bit bob(Bit y) const noexcept { return Bit(((bob_map >> y.index()) & 1U) != 0); }
  /// Position in enumerate_lhv(): alice_map * 4 + bob_map.
  std::size_t index() const noexcept { return alice_map * 4U + bob_map; }

  friend constexpr bool operator==(const LhvStrategy&, const LhvStrategy&) = default;
};

std::vector<LhvStrategy> enumerate_lhv();

class LhvBox final : public Box {
 public:
  explicit LhvBox(LhvStrategy strategy) : strategy_(strategy) {}
  std::string name() const override { return "lhv:" + std::to_string(strategy_.index()); }
  OutputPair sample(Bit x, Bit y, SplitMix64&) const override {
    return {strategy_.alice(x), strategy_.bob(y)};
  }
  std::optional<ExactBehavior> analytic() const override;
  const LhvStrategy& strategy() const noexcept { return strategy_; }

 private:
  LhvStrategy strategy_;
};

/// The rubber-band engine behind the common box interface. Each sample runs
/// one trial seeded from the next value of `rng`.
class RubberBandBox final : public Box {
 public:
  explicit RubberBandBox(rubberband::BandGeometry geometry = {},
                         rubberband::TimingParams timing = {})
      : geometry_(geometry), timing_(timing) {}
  std::string name() const override { return "rubberband"; }
  OutputPair sample(Bit x, Bit y, SplitMix64& rng) const override;

 private:
  rubberband::BandGeometry geometry_;
  rubberband::TimingParams timing_;
};

/// Throws std::invalid_argument when the box has no closed form.
ExactBehavior analytic_behavior(const Box& box);

}  // namespace prbox::refboxes
