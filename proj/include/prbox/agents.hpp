#pragma once

// The trial protocol run as isolated endpoints exchanging messages.
//
// Alice, Bob and the Tube only see messages addressed to them. The Referee
// hands out inputs and collects outputs. Every delivered message lands in the
// trace, which audit() inspects for direct Alice <-> Bob traffic.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prbox/core.hpp"
#include "prbox/rubberband.hpp"

namespace prbox::agents {

enum class Endpoint : std::uint8_t { Referee, Alice, Bob, Tube };

std::string_view to_string(Endpoint endpoint) noexcept;
constexpr Endpoint endpoint_of(Party party) noexcept {
  return party == Party::Alice ? Endpoint::Alice : Endpoint::Bob;
}

namespace msg {
struct DeliverInput {
  Bit input;
  friend constexpr bool operator==(const DeliverInput&, const DeliverInput&) = default;
};
struct ReadColor {
  friend constexpr bool operator==(ReadColor, ReadColor) noexcept { return true; }
};
struct ColorIs {
  Color color;
  friend constexpr bool operator==(const ColorIs&, const ColorIs&) = default;
};
struct Pull {
  friend constexpr bool operator==(Pull, Pull) noexcept { return true; }
};
struct PieceDelivered {
  double length;
  Color color;
  friend constexpr bool operator==(const PieceDelivered&, const PieceDelivered&) = default;
};
struct Sucked {
  friend constexpr bool operator==(Sucked, Sucked) noexcept { return true; }
};
struct Output {
  Bit output;
  friend constexpr bool operator==(const Output&, const Output&) = default;
};
}  // namespace msg

using Message = std::variant<msg::DeliverInput, msg::ReadColor, msg::ColorIs, msg::Pull,
                             msg::PieceDelivered, msg::Sucked, msg::Output>;

/// snake_case kind name, e.g. "piece_delivered".
std::string_view kind_name(const Message& message) noexcept;

struct TraceEvent {
  double tick = 0.0;
  Endpoint from = Endpoint::Referee;
  Endpoint to = Endpoint::Referee;
  Message message;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

/// A message an endpoint wants sent, stamped with the tick it takes effect.
struct Outgoing {
  double tick = 0.0;
  Endpoint to = Endpoint::Referee;
  Message message;
};

/// Thrown when an endpoint receives a message its current state cannot accept.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PartyAgent {
 public:
  enum class Phase : std::uint8_t { AwaitingInput, AwaitingColor, Counting, Done };

  PartyAgent(Party role, double unstretched_length, const rubberband::TimingParams& timing);

  /// Handles one message addressed to this party.
  std::vector<Outgoing> step(const Message& incoming, double tick);

  Party role() const noexcept { return role_; }
  Phase phase() const noexcept { return phase_; }
  std::optional<Bit> input() const noexcept { return input_; }
  std::optional<Bit> l() const noexcept { return l_; }
  std::optional<Bit> c() const noexcept { return c_; }
  std::optional<Bit> output() const noexcept { return output_; }
  std::optional<double> piece_length() const noexcept { return piece_length_; }
  std::optional<double> completion_tick() const noexcept { return completion_tick_; }
  bool pulled() const noexcept { return pulled_; }

 private:
  std::vector<Outgoing> finish(Bit output, double tick);

  Party role_;
  double unstretched_length_;
  rubberband::TimingParams timing_;
  Phase phase_ = Phase::AwaitingInput;
  std::optional<Bit> input_;
  std::optional<Bit> l_;
  std::optional<Bit> c_;
  std::optional<Bit> output_;
  std::optional<double> piece_length_;
  std::optional<double> completion_tick_;
  bool pulled_ = false;
};

class TubeAgent {
 public:
  enum class Phase : std::uint8_t { Loaded, Resolved, Sucked };

  /// Loads a band drawn from the trial's stream (color is the first draw).
  TubeAgent(std::uint64_t trial_seed, const rubberband::BandGeometry& geometry,
            const rubberband::TimingParams& timing);

  /// ReadColor gets an immediate ColorIs; Pull is held until resolve().
  std::vector<Outgoing> receive(Endpoint from, const Message& incoming, double tick);

  /// Acts on the pulls held at the deadline tick. Depends only on how many
  /// parties pulled and which end each grips.
  std::vector<Outgoing> resolve(double tick);

  double deadline() const noexcept { return timing_.pull_time(); }
  Phase phase() const noexcept { return phase_; }
  Color color() const noexcept { return band_.color; }
  const rubberband::BandGeometry& geometry() const noexcept { return band_.geometry; }
  const rubberband::BandState& band_state() const noexcept { return state_; }

 private:
  double delivery_tick(double piece, double tick) const noexcept;

  rubberband::SplitMix64 rng_;
  rubberband::BandSpec band_;
  rubberband::TimingParams timing_;
  rubberband::PerParty<bool> pulls_;
  rubberband::BandState state_ = rubberband::Intact{};
  Phase phase_ = Phase::Loaded;
};

struct ProtocolRun {
  rubberband::TrialRecord record;
  Trace trace;
};

/// Event-driven execution in logical time. Simultaneous events run in the
/// order Referee, Alice, Bob, Tube, then by send order; the tube's deadline
/// runs after every message of its tick.
ProtocolRun run_protocol(const rubberband::TrialConfig& config,
                         const rubberband::TimingParams& timing);

struct AuditReport {
  std::uint64_t alice_to_bob_count = 0;
  std::uint64_t bob_to_alice_count = 0;
  bool verdict = true;

  AuditReport& operator+=(const AuditReport& other) noexcept;
  friend constexpr bool operator==(const AuditReport&, const AuditReport&) = default;
};

AuditReport audit(const Trace& trace) noexcept;

/// One JSON object per line:
/// {"trial":N,"tick":T,"from":"alice","to":"tube","kind":"pull","payload":{...}}
std::string format_trace_line(const TraceEvent& event, std::uint64_t trial_index);
void write_trace(std::ostream& out, const Trace& trace, std::uint64_t trial_index);

}  // namespace prbox::agents
