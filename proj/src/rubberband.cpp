#include "prbox/rubberband.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace prbox::rubberband {

void BandGeometry::validate() const {
  if (!(unstretched_length > 0.0) || !std::isfinite(unstretched_length)) {
    throw std::invalid_argument("unstretched length L must be positive and finite");
  }
  if (!(tube_span > 0.0) || !std::isfinite(tube_span)) {
    throw std::invalid_argument("tube span D must be positive and finite");
  }
  if (tube_span < unstretched_length) {
    throw std::invalid_argument("tube span D must be at least L (the band is stretched)");
  }
}

void TimingParams::validate() const {
  if (!(tick_duration > 0.0) || !std::isfinite(tick_duration)) {
    throw std::invalid_argument("tick duration must be positive and finite");
  }
  if (count_ticks != 3) {
    throw std::invalid_argument("parties count to three before pulling");
  }
  if (!(retraction_speed > 0.0) || !std::isfinite(retraction_speed)) {
    throw std::invalid_argument("retraction speed v must be positive and finite");
  }
  if (!(signal_speed > 0.0) || !std::isfinite(signal_speed)) {
    throw std::invalid_argument("signal speed c must be positive and finite");
  }
  if (retraction_speed > signal_speed) {
    throw std::invalid_argument("retraction speed v must not exceed signal speed c");
  }
}

BandSpec sample_band(SplitMix64& rng, const BandGeometry& geometry) {
  const bool yellow = (rng.next() >> 63) != 0;
  return BandSpec{geometry, yellow ? Color::Yellow : Color::Red};
}

bool is_admissible_break_point(double p, double unstretched_length) noexcept {
  if (!(p > 0.0) || !(p < unstretched_length)) {
    return false;
  }
  return std::abs(p - unstretched_length / 2.0) > kMidpointExclusion * unstretched_length;
}

double sample_break_point(SplitMix64& rng, double unstretched_length) {
  if (!(unstretched_length > 0.0)) {
    throw std::invalid_argument("unstretched length L must be positive");
  }
  for (;;) {
    const double p = rng.uniform_open01() * unstretched_length;
    if (is_admissible_break_point(p, unstretched_length)) {
      return p;
    }
  }
}

PullResolution resolve_pulls(Bit x, Bit y, const BandSpec& band, SplitMix64& rng) {
  const double length = band.geometry.unstretched_length;
  PullResolution out{Intact{}, {}};
  if (x.as_bool() && y.as_bool()) {
    const double p = sample_break_point(rng, length);
    out.state = Broken{p};
    out.piece_length.alice = p;
    out.piece_length.bob = length - p;
  } else if (x.as_bool()) {
    out.piece_length.alice = length;
  } else if (y.as_bool()) {
    out.piece_length.bob = length;
  } else {
    out.state = Sucked{};
  }
  return out;
}

Bit length_to_l(double piece_length, double unstretched_length) {
  if (!(piece_length > 0.0) || piece_length > unstretched_length) {
    throw std::domain_error("piece length " + std::to_string(piece_length) +
                            " outside (0, L]");
  }
  const double half = unstretched_length / 2.0;
  if (piece_length == half) {
    throw std::domain_error("piece length exactly L/2 has no defined reading");
  }
  return Bit(piece_length > half);
}

Bit local_output(Bit input, Bit c, std::optional<Bit> l) {
  if (!input.as_bool()) {
    return c;
  }
  if (!l) {
    throw std::invalid_argument("input 1 requires a length reading");
  }
  return xnor_op(*l, c);
}

PerParty<std::optional<double>> retraction_distances(const TrialRecord& record) {
  PerParty<std::optional<double>> out;
  const auto& g = record.geometry;
  for (Party party : {Party::Alice, Party::Bob}) {
    if (const auto& piece = record.piece_length[party]) {
      out[party] = g.tube_span * (*piece / g.unstretched_length);
    }
  }
  return out;
}

PerParty<double> completion_time(const TrialRecord& record, const TimingParams& timing) {
  PerParty<double> out{0.0, 0.0};
  const auto distances = retraction_distances(record);
  for (Party party : {Party::Alice, Party::Bob}) {
    if (const auto& d = distances[party]) {
      out[party] = timing.pull_time() + *d / timing.retraction_speed;
    }
  }
  return out;
}

TrialRecord run_trial(const TrialConfig& config, const TimingParams& timing) {
  const BandGeometry geometry = config.geometry();
  geometry.validate();
  timing.validate();

  SplitMix64 rng(config.seed);
  const BandSpec band = sample_band(rng, geometry);
  PullResolution pulls = resolve_pulls(config.x, config.y, band, rng);

  TrialRecord record;
  record.inputs = {config.x, config.y};
  record.color = band.color;
  record.geometry = geometry;
  record.pulled = {config.x.as_bool(), config.y.as_bool()};
  record.band_final = pulls.state;
  record.piece_length = pulls.piece_length;

  const Bit color = color_bit(band.color);
  const Bit inputs[2] = {config.x, config.y};
  Bit outputs[2];
  for (Party party : {Party::Alice, Party::Bob}) {
    const Bit input = inputs[party == Party::Alice ? 0 : 1];
    record.c[party] = color;
    if (const auto& piece = record.piece_length[party]) {
      record.l[party] = length_to_l(*piece, geometry.unstretched_length);
    }
    outputs[party == Party::Alice ? 0 : 1] = local_output(input, color, record.l[party]);
  }
  record.outputs = {outputs[0], outputs[1]};
  record.completion_ticks = completion_time(record, timing);
  return record;
}

TrialConfig batch_trial_config(std::uint64_t master_seed, std::uint64_t index,
                               std::optional<BandGeometry> overrides) {
  const InputPair setting = kAllSettings[index % 4];
  return TrialConfig{setting.alice, setting.bob, derive_trial_seed(master_seed, index),
                     overrides};
}

}  // namespace prbox::rubberband
