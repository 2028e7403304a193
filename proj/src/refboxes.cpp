#include "prbox/refboxes.hpp"

#include <stdexcept>

namespace prbox::refboxes {

namespace {

// boost 1.74 mixed rational/int comparisons recurse under C++20 rewritten
// operators; compare rational to rational only.
const Rational kZero(0);
const Rational kOne(1);

constexpr std::size_t flat(Bit x, Bit y, Bit a, Bit b) noexcept {
  return x.index() * 8 + y.index() * 4 + a.index() * 2 + b.index();
}

constexpr Bit kBits[2] = {Bit::zero(), Bit::one()};

Rational party_marginal(const ExactBehavior& behavior, Party party, Bit x, Bit y) {
  Rational m = kZero;
  for (Bit other : kBits) {
    m += party == Party::Alice ? behavior.at(x, y, Bit::one(), other)
                               : behavior.at(x, y, other, Bit::one());
  }
  return m;
}

}  // namespace

Rational& ExactBehavior::at(Bit x, Bit y, Bit a, Bit b) noexcept { return p[flat(x, y, a, b)]; }
const Rational& ExactBehavior::at(Bit x, Bit y, Bit a, Bit b) const noexcept {
  return p[flat(x, y, a, b)];
}

bool ExactBehavior::is_normalized() const {
  for (Bit x : kBits) {
    for (Bit y : kBits) {
      Rational sum = kZero;
      for (Bit a : kBits) {
        for (Bit b : kBits) {
          const Rational& v = at(x, y, a, b);
          if (v < kZero || v > kOne) {
            return false;
          }
          sum += v;
        }
      }
      if (sum != kOne) {
        return false;
      }
    }
  }
  return true;
}

bool ExactBehavior::is_no_signaling() const {
  for (Bit own : kBits) {
    if (party_marginal(*this, Party::Alice, own, Bit::zero()) !=
        party_marginal(*this, Party::Alice, own, Bit::one())) {
      return false;
    }
    if (party_marginal(*this, Party::Bob, Bit::zero(), own) !=
        party_marginal(*this, Party::Bob, Bit::one(), own)) {
      return false;
    }
  }
  return true;
}

stats::Behavior ExactBehavior::to_behavior() const {
  stats::Behavior out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.p[i] = boost::rational_cast<double>(p[i]);
  }
  return out;
}

OutputPair ideal_pr_sample(Bit x, Bit y, SplitMix64& rng) {
  const Bit a((rng.next() >> 63) != 0);
  return {a, xor_op(a, and_op(x, y))};
}

std::optional<ExactBehavior> IdealPrBox::analytic() const {
  ExactBehavior out;
  const Rational half(1, 2);
  for (Bit x : kBits) {
    for (Bit y : kBits) {
      for (Bit a : kBits) {
        out.at(x, y, a, xor_op(a, and_op(x, y))) += half;
      }
    }
  }
  return out;
}

std::vector<LhvStrategy> enumerate_lhv() {
  std::vector<LhvStrategy> out;
  out.reserve(16);
  for (std::uint8_t alice = 0; alice < 4; ++alice) {
    for (std::uint8_t bob = 0; bob < 4; ++bob) {
      out.push_back(LhvStrategy{alice, bob});
    }
  }
  return out;
}

std::optional<ExactBehavior> LhvBox::analytic() const {
  ExactBehavior out;
  for (Bit x : kBits) {
    for (Bit y : kBits) {
      out.at(x, y, strategy_.alice(x), strategy_.bob(y)) = kOne;
    }
  }
  return out;
}

OutputPair RubberBandBox::sample(Bit x, Bit y, SplitMix64& rng) const {
  const rubberband::TrialConfig config{x, y, rng.next(), geometry_};
  return rubberband::run_trial(config, timing_).outputs;
}

ExactBehavior analytic_behavior(const Box& box) {
  if (auto behavior = box.analytic()) {
    return *behavior;
  }
  throw std::invalid_argument("box '" + box.name() + "' has no closed-form behavior");
}

}  // namespace prbox::refboxes
