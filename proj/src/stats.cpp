#include "prbox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace prbox::stats {

namespace {

constexpr std::size_t flat(Bit x, Bit y, Bit a, Bit b) noexcept {
  return x.index() * 8 + y.index() * 4 + a.index() * 2 + b.index();
}

constexpr Bit kBits[2] = {Bit::zero(), Bit::one()};

/// Mutual information in bits of a 2x2 joint weight table (need not be normalized).
double table_mi_bits(const double joint[2][2]) {
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      total += joint[i][j];
    }
  }
  if (total <= 0.0) {
    return 0.0;
  }
  double row[2] = {0.0, 0.0};
  double col[2] = {0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      row[i] += joint[i][j] / total;
      col[j] += joint[i][j] / total;
    }
  }
  double mi = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double pij = joint[i][j] / total;
      if (pij > 0.0) {
        mi += pij * std::log2(pij / (row[i] * col[j]));
      }
    }
  }
  return std::max(mi, 0.0);
}

/// weight[sender_input][receiver_outcome] for a fixed receiver input.
template <typename Cell>
void receiver_table(Party receiver, Bit own_input, Cell cell, double out[2][2]) {
  for (Bit remote : kBits) {
    for (Bit outcome : kBits) {
      double w = 0.0;
      for (Bit other : kBits) {
        if (receiver == Party::Bob) {
          w += cell(remote, own_input, other, outcome);
        } else {
          w += cell(own_input, remote, outcome, other);
        }
      }
      out[remote.index()][outcome.index()] = w;
    }
  }
}

void require_all_settings(const JointCounts& counts) {
  for (auto n : counts.trials_per_setting) {
    if (n == 0) {
      throw std::invalid_argument("every input setting needs at least one trial");
    }
  }
}

}  // namespace

void JointCounts::add(InputPair inputs, OutputPair outputs) noexcept {
  ++counts[flat(inputs.alice, inputs.bob, outputs.alice, outputs.bob)];
  ++trials_per_setting[setting_index(inputs)];
}

std::uint64_t JointCounts::count(Bit x, Bit y, Bit a, Bit b) const noexcept {
  return counts[flat(x, y, a, b)];
}

std::uint64_t JointCounts::trials(Bit x, Bit y) const noexcept {
  return trials_per_setting[setting_index({x, y})];
}

std::uint64_t JointCounts::total() const noexcept {
  std::uint64_t sum = 0;
  for (auto n : trials_per_setting) {
    sum += n;
  }
  return sum;
}

JointCounts& JointCounts::operator+=(const JointCounts& other) noexcept {
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts[i] += other.counts[i];
  }
  for (std::size_t i = 0; i < trials_per_setting.size(); ++i) {
    trials_per_setting[i] += other.trials_per_setting[i];
  }
  return *this;
}

double& Behavior::at(Bit x, Bit y, Bit a, Bit b) noexcept { return p[flat(x, y, a, b)]; }
double Behavior::at(Bit x, Bit y, Bit a, Bit b) const noexcept { return p[flat(x, y, a, b)]; }

bool Behavior::is_valid(double tolerance) const noexcept {
  for (Bit x : kBits) {
    for (Bit y : kBits) {
      double sum = 0.0;
      for (Bit a : kBits) {
        for (Bit b : kBits) {
          const double v = at(x, y, a, b);
          if (!(v >= 0.0 && v <= 1.0)) {
            return false;
          }
          sum += v;
        }
      }
      if (std::abs(sum - 1.0) > tolerance) {
        return false;
      }
    }
  }
  return true;
}

Behavior behavior_from_counts(const JointCounts& counts) {
  require_all_settings(counts);
  Behavior out;
  for (Bit x : kBits) {
    for (Bit y : kBits) {
      const auto n = static_cast<double>(counts.trials(x, y));
      for (Bit a : kBits) {
        for (Bit b : kBits) {
          out.at(x, y, a, b) = static_cast<double>(counts.count(x, y, a, b)) / n;
        }
      }
    }
  }
  return out;
}

Behavior mix(const Behavior& first, const Behavior& second, double lambda) {
  Behavior out;
  for (std::size_t i = 0; i < out.p.size(); ++i) {
    out.p[i] = lambda * first.p[i] + (1.0 - lambda) * second.p[i];
  }
  return out;
}

double correlator(const Behavior& behavior, Bit x, Bit y) {
  const Bit o = Bit::zero();
  const Bit i = Bit::one();
  const double agree = behavior.at(x, y, o, o) + behavior.at(x, y, i, i);
  const double disagree = behavior.at(x, y, o, i) + behavior.at(x, y, i, o);
  const double total = agree + disagree;
  if (total <= 0.0) {
    throw std::invalid_argument("behavior slice has no probability mass");
  }
  return (agree - disagree) / total;
}

double chsh(const Behavior& behavior) {
  const Bit o = Bit::zero();
  const Bit i = Bit::one();
  return correlator(behavior, o, o) + correlator(behavior, o, i) + correlator(behavior, i, o) -
         correlator(behavior, i, i);
}

double marginal(const Behavior& behavior, Party party, Bit x, Bit y) {
  const Bit o = Bit::zero();
  const Bit i = Bit::one();
  if (party == Party::Alice) {
    return behavior.at(x, y, i, o) + behavior.at(x, y, i, i);
  }
  return behavior.at(x, y, o, i) + behavior.at(x, y, i, i);
}

double marginal(const JointCounts& counts, Party party, Bit x, Bit y) {
  const auto n = counts.trials(x, y);
  if (n == 0) {
    throw std::invalid_argument("setting has no trials");
  }
  const Bit o = Bit::zero();
  const Bit i = Bit::one();
  const std::uint64_t ones = party == Party::Alice
                                 ? counts.count(x, y, i, o) + counts.count(x, y, i, i)
                                 : counts.count(x, y, o, i) + counts.count(x, y, i, i);
  return static_cast<double>(ones) / static_cast<double>(n);
}

double signaling_tv(const Behavior& behavior, Party receiver) {
  double worst = 0.0;
  for (Bit own : kBits) {
    double m[2];
    for (Bit remote : kBits) {
      m[remote.index()] = receiver == Party::Alice ? marginal(behavior, receiver, own, remote)
                                                   : marginal(behavior, receiver, remote, own);
    }
    // TV between two Bernoulli laws is the gap between their means.
    worst = std::max(worst, std::abs(m[0] - m[1]));
  }
  return worst;
}

double mutual_information_leak(const JointCounts& counts, Party receiver) {
  require_all_settings(counts);
  const auto total = static_cast<double>(counts.total());
  double leak = 0.0;
  for (Bit own : kBits) {
    double table[2][2];
    receiver_table(
        receiver, own,
        [&](Bit x, Bit y, Bit a, Bit b) { return static_cast<double>(counts.count(x, y, a, b)); },
        table);
    double weight = 0.0;
    for (auto& r : table) {
      weight += r[0] + r[1];
    }
    leak += (weight / total) * table_mi_bits(table);
  }
  return leak;
}

double mutual_information_leak(const Behavior& behavior, Party receiver) {
  double leak = 0.0;
  for (Bit own : kBits) {
    double table[2][2];
    receiver_table(
        receiver, own, [&](Bit x, Bit y, Bit a, Bit b) { return behavior.at(x, y, a, b); }, table);
    leak += 0.5 * table_mi_bits(table);
  }
  return leak;
}

double ks_uniform(std::span<const double> samples, double lo, double hi) {
  if (samples.size() < 2) {
    throw std::invalid_argument("KS statistic needs at least two samples");
  }
  if (!(lo < hi)) {
    throw std::invalid_argument("KS reference interval must satisfy lo < hi");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double cdf = std::clamp((sorted[k] - lo) / (hi - lo), 0.0, 1.0);
    const double above = static_cast<double>(k + 1) / n - cdf;
    const double below = cdf - static_cast<double>(k) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double ks_critical_value_5pct(std::size_t n) {
  return 1.36 / std::sqrt(static_cast<double>(n));
}

}  // namespace prbox::stats
