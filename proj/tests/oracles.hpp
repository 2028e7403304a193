#pragma once

// Test-only reference values computed without the engine code paths.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

/// Outputs (a, b) by hand enumeration of the measurement rules.
/// yellow: band color is yellow. alice_long: Alice's piece exceeds half the
/// band (only meaningful when both inputs are 1).
struct Outputs {
  int a;
  int b;
};

inline Outputs expected_outputs(int x, int y, bool yellow, bool alice_long) {
  // Frozen table. Color readers report yellow=1/red=0. A sole puller holds
  // the whole band, so its length reading is 1 and xnor(1, c) = c. When both
  // pull, Alice reads l = alice_long and Bob reads the opposite.
  const int c = yellow ? 1 : 0;
  if (x == 0 && y == 0) return {c, c};
  if (x == 0 && y == 1) return {c, c};
  if (x == 1 && y == 0) return {c, c};
  // x == 1 && y == 1
  if (yellow && !alice_long) return {0, 1};
  if (!yellow && !alice_long) return {1, 0};
  if (yellow && alice_long) return {1, 0};
  return {0, 1};
}

/// CHSH of a deterministic strategy given as output tables, by direct sum
/// over settings of sign * (-1)^(a xor b).
inline int lhv_chsh(const std::array<int, 2>& alice, const std::array<int, 2>& bob) {
  int s = 0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const int agree = (alice[x] == bob[y]) ? 1 : -1;
      s += (x == 1 && y == 1) ? -agree : agree;
    }
  }
  return s;
}

inline int best_lhv_chsh() {
  int best = -4;
  for (int am = 0; am < 4; ++am) {
    for (int bm = 0; bm < 4; ++bm) {
      const std::array<int, 2> alice{am & 1, (am >> 1) & 1};
      const std::array<int, 2> bob{bm & 1, (bm >> 1) & 1};
      const int s = lhv_chsh(alice, bob);
      best = s > best ? s : best;
    }
  }
  return best;
}

/// Pearson chi-square for a 2x2 contingency table (1 degree of freedom).
inline double chi_square_2x2(const std::array<std::array<double, 2>, 2>& table) {
  double row[2] = {table[0][0] + table[0][1], table[1][0] + table[1][1]};
  double col[2] = {table[0][0] + table[1][0], table[0][1] + table[1][1]};
  const double n = row[0] + row[1];
  double chi = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double e = row[i] * col[j] / n;
      chi += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  }
  return chi;
}

/// Chi-square 1 dof critical value at 0.1%.
inline constexpr double kChiSquare1Dof001 = 10.828;

/// Exact binomial 3-sigma half-width for p = 1/2.
inline double three_sigma(double n) { return 3.0 * std::sqrt(0.25 / n); }

}  // namespace oracle
