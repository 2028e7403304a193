#include <doctest.h>

#include "prbox/core.hpp"

using namespace prbox;

namespace {
constexpr Bit O = Bit::zero();
constexpr Bit I = Bit::one();
}  // namespace

TEST_CASE("gates: truth table rows") {
  CHECK(and_op(O, O) == O);
  CHECK(and_op(I, I) == I);
  CHECK(and_op(O, I) == O);

  CHECK(xor_op(I, I) == O);
  CHECK(xor_op(I, O) == I);
  CHECK(xor_op(O, O) == O);

  CHECK(xnor_op(I, I) == I);
  CHECK(xnor_op(O, I) == O);
  CHECK(xnor_op(O, O) == I);
}

TEST_CASE("xnor is the complement of xor") {
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      const Bit bp = Bit::from_int(p);
      const Bit bq = Bit::from_int(q);
      CHECK(xnor_op(bp, bq).as_int() == 1 - xor_op(bp, bq).as_int());
    }
  }
}

TEST_CASE("nlb constraint: worked cases") {
  CHECK(nlb_constraint({O, O}, {I, I}));
  CHECK(nlb_constraint({O, I}, {O, O}));
  CHECK_FALSE(nlb_constraint({I, I}, {I, I}));
}

TEST_CASE("nlb constraint agrees with the truth table on all 16 rows") {
  int satisfied = 0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const bool expected = ((a ^ b) == (x & y));
          const bool got = nlb_constraint({Bit::from_int(x), Bit::from_int(y)},
                                          {Bit::from_int(a), Bit::from_int(b)});
          CHECK(got == expected);
          satisfied += got ? 1 : 0;
        }
      }
    }
  }
  CHECK(satisfied == 8);
}

TEST_CASE("bits reject values outside {0,1}") {
  CHECK_THROWS_AS(Bit::from_int(2), std::out_of_range);
  CHECK_THROWS_AS(Bit::from_int(-1), std::out_of_range);
  CHECK(Bit::from_int(1) == I);
  CHECK(!I == O);
}

TEST_CASE("color mapping") {
  CHECK(color_bit(Color::Yellow) == I);
  CHECK(color_bit(Color::Red) == O);
  CHECK(to_string(Color::Yellow) == "yellow");
}

TEST_CASE("settings are enumerated in canonical order") {
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(setting_index(kAllSettings[i]) == i);
  }
}
