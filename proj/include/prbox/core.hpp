#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace prbox {

/// Two-valued bit. Only 0 and 1 are constructible.
class Bit {
 public:
  constexpr Bit() noexcept = default;
  constexpr explicit Bit(bool value) noexcept : value_(value) {}

  static constexpr Bit zero() noexcept { return Bit(false); }
  static constexpr Bit one() noexcept { return Bit(true); }

  /// Throws std::out_of_range for anything other than 0 or 1.
  static constexpr Bit from_int(int value) {
    if (value != 0 && value != 1) {
      throw std::out_of_range("bit value must be 0 or 1");
    }
    return Bit(value == 1);
  }

  constexpr bool as_bool() const noexcept { return value_; }
  constexpr int as_int() const noexcept { return value_ ? 1 : 0; }
  constexpr std::size_t index() const noexcept { return value_ ? 1U : 0U; }

  constexpr Bit operator!() const noexcept { return Bit(!value_); }

  friend constexpr bool operator==(Bit, Bit) noexcept = default;

 private:
  bool value_ = false;
};

enum class Color : std::uint8_t { Red, Yellow };

/// Yellow reads as 1, red as 0. Used wherever a party turns a color into a bit.
constexpr Bit color_bit(Color color) noexcept { return Bit(color == Color::Yellow); }

std::string_view to_string(Color color) noexcept;

enum class Party : std::uint8_t { Alice, Bob };

std::string_view to_string(Party party) noexcept;

struct InputPair {
  Bit alice;
  Bit bob;
  friend constexpr bool operator==(const InputPair&, const InputPair&) noexcept = default;
};

struct OutputPair {
  Bit alice;
  Bit bob;
  friend constexpr bool operator==(const OutputPair&, const OutputPair&) noexcept = default;
};

constexpr Bit and_op(Bit p, Bit q) noexcept { return Bit(p.as_bool() && q.as_bool()); }
constexpr Bit xor_op(Bit p, Bit q) noexcept { return Bit(p.as_bool() != q.as_bool()); }
constexpr Bit xnor_op(Bit p, Bit q) noexcept { return Bit(p.as_bool() == q.as_bool()); }

/// XOR of the outputs equals AND of the inputs.
constexpr bool nlb_constraint(InputPair inputs, OutputPair outputs) noexcept {
  return xor_op(outputs.alice, outputs.bob) == and_op(inputs.alice, inputs.bob);
}

/// The four input settings in canonical order (0,0), (0,1), (1,0), (1,1).
inline constexpr InputPair kAllSettings[4] = {
    {Bit::zero(), Bit::zero()},
    {Bit::zero(), Bit::one()},
    {Bit::one(), Bit::zero()},
    {Bit::one(), Bit::one()},
};

constexpr std::size_t setting_index(InputPair inputs) noexcept {
  return inputs.alice.index() * 2 + inputs.bob.index();
}

}  // namespace prbox
