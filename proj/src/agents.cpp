#include "prbox/agents.hpp"

#include <queue>
#include <sstream>
#include <tuple>

#include "prbox/format.hpp"

namespace prbox::agents {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void unexpected(std::string_view who, const Message& message, std::string_view state) {
  throw ProtocolError(std::string(who) + " cannot accept " + std::string(kind_name(message)) +
                      " while " + std::string(state));
}

}  // namespace

std::string_view to_string(Endpoint endpoint) noexcept {
  switch (endpoint) {
    case Endpoint::Referee: return "referee";
    case Endpoint::Alice: return "alice";
    case Endpoint::Bob: return "bob";
    case Endpoint::Tube: return "tube";
  }
  return "unknown";
}

std::string_view kind_name(const Message& message) noexcept {
  return std::visit(Overloaded{
                        [](const msg::DeliverInput&) { return std::string_view("deliver_input"); },
                        [](const msg::ReadColor&) { return std::string_view("read_color"); },
                        [](const msg::ColorIs&) { return std::string_view("color_is"); },
                        [](const msg::Pull&) { return std::string_view("pull"); },
                        [](const msg::PieceDelivered&) { return std::string_view("piece_delivered"); },
                        [](const msg::Sucked&) { return std::string_view("sucked"); },
                        [](const msg::Output&) { return std::string_view("output"); },
                    },
                    message);
}

// ---------------------------------------------------------------------------
// PartyAgent

PartyAgent::PartyAgent(Party role, double unstretched_length,
                       const rubberband::TimingParams& timing)
    : role_(role), unstretched_length_(unstretched_length), timing_(timing) {}

std::vector<Outgoing> PartyAgent::finish(Bit output, double tick) {
  output_ = output;
  completion_tick_ = tick;
  phase_ = Phase::Done;
  return {Outgoing{tick, Endpoint::Referee, msg::Output{output}}};
}

std::vector<Outgoing> PartyAgent::step(const Message& incoming, double tick) {
  const std::string_view who = to_string(role_);
  switch (phase_) {
    case Phase::AwaitingInput: {
      const auto* deliver = std::get_if<msg::DeliverInput>(&incoming);
      if (deliver == nullptr) {
        unexpected(who, incoming, "awaiting input");
      }
      input_ = deliver->input;
      if (!deliver->input.as_bool()) {
        phase_ = Phase::AwaitingColor;
        return {Outgoing{tick, Endpoint::Tube, msg::ReadColor{}}};
      }
      // Count to three, then pull.
      phase_ = Phase::Counting;
      pulled_ = true;
      return {Outgoing{tick + timing_.pull_time(), Endpoint::Tube, msg::Pull{}}};
    }
    case Phase::AwaitingColor: {
      const auto* color = std::get_if<msg::ColorIs>(&incoming);
      if (color == nullptr) {
        unexpected(who, incoming, "awaiting color");
      }
      c_ = color_bit(color->color);
      return finish(*c_, tick);
    }
    case Phase::Counting: {
      const auto* piece = std::get_if<msg::PieceDelivered>(&incoming);
      if (piece == nullptr) {
        unexpected(who, incoming, "waiting for a piece");
      }
      piece_length_ = piece->length;
      l_ = rubberband::length_to_l(piece->length, unstretched_length_);
      c_ = color_bit(piece->color);
      return finish(xnor_op(*l_, *c_), tick);
    }
    case Phase::Done:
      // A color reader still gripping the band feels it sucked away.
      if (std::holds_alternative<msg::Sucked>(incoming)) {
        return {};
      }
      unexpected(who, incoming, "done");
  }
  return {};
}

// ---------------------------------------------------------------------------
// TubeAgent

TubeAgent::TubeAgent(std::uint64_t trial_seed, const rubberband::BandGeometry& geometry,
                     const rubberband::TimingParams& timing)
    : rng_(trial_seed), band_(rubberband::sample_band(rng_, geometry)), timing_(timing) {}

double TubeAgent::delivery_tick(double piece, double tick) const noexcept {
  const auto& g = band_.geometry;
  const double distance = g.tube_span * (piece / g.unstretched_length);
  return tick + distance / timing_.retraction_speed;
}

std::vector<Outgoing> TubeAgent::receive(Endpoint from, const Message& incoming, double tick) {
  if (from != Endpoint::Alice && from != Endpoint::Bob) {
    unexpected("tube", incoming, "receiving from a non-party");
  }
  const Party party = from == Endpoint::Alice ? Party::Alice : Party::Bob;
  if (std::holds_alternative<msg::ReadColor>(incoming)) {
    if (phase_ != Phase::Loaded) {
      unexpected("tube", incoming, "empty");
    }
    return {Outgoing{tick, from, msg::ColorIs{band_.color}}};
  }
  if (std::holds_alternative<msg::Pull>(incoming)) {
    if (phase_ == Phase::Sucked) {
      throw ProtocolError("pull after suction");
    }
    if (phase_ != Phase::Loaded || pulls_[party]) {
      unexpected("tube", incoming, "already resolved");
    }
    pulls_[party] = true;
    return {};
  }
  unexpected("tube", incoming, "loaded");
}

std::vector<Outgoing> TubeAgent::resolve(double tick) {
  if (phase_ != Phase::Loaded) {
    throw ProtocolError("tube resolved twice");
  }
  const double length = band_.geometry.unstretched_length;
  const int pull_count = (pulls_.alice ? 1 : 0) + (pulls_.bob ? 1 : 0);
  std::vector<Outgoing> out;
  switch (pull_count) {
    case 2: {
      const double p = rubberband::sample_break_point(rng_, length);
      const double bob_piece = length - p;
      state_ = rubberband::Broken{p};
      out.push_back({delivery_tick(p, tick), Endpoint::Alice, msg::PieceDelivered{p, band_.color}});
      out.push_back(
          {delivery_tick(bob_piece, tick), Endpoint::Bob, msg::PieceDelivered{bob_piece, band_.color}});
      break;
    }
    case 1: {
      const Endpoint puller = pulls_.alice ? Endpoint::Alice : Endpoint::Bob;
      out.push_back({delivery_tick(length, tick), puller, msg::PieceDelivered{length, band_.color}});
      break;
    }
    default:
      state_ = rubberband::Sucked{};
      phase_ = Phase::Sucked;
      out.push_back({tick, Endpoint::Alice, msg::Sucked{}});
      out.push_back({tick, Endpoint::Bob, msg::Sucked{}});
      return out;
  }
  phase_ = Phase::Resolved;
  return out;
}

// ---------------------------------------------------------------------------
// Scheduler

namespace {

struct Scheduled {
  double tick;
  Endpoint from;
  std::uint64_t sequence;
  Endpoint to;
  Message message;
  bool deadline = false;
};

// Earliest tick first; ties by sender (Referee, Alice, Bob, Tube) then send order.
// Deadlines sort after every message of their tick.
struct Later {
  bool operator()(const Scheduled& a, const Scheduled& b) const noexcept {
    return std::tuple(a.tick, a.deadline, static_cast<int>(a.from), a.sequence) >
           std::tuple(b.tick, b.deadline, static_cast<int>(b.from), b.sequence);
  }
};

}  // namespace

ProtocolRun run_protocol(const rubberband::TrialConfig& config,
                         const rubberband::TimingParams& timing) {
  const rubberband::BandGeometry geometry = config.geometry();
  geometry.validate();
  timing.validate();

  PartyAgent alice(Party::Alice, geometry.unstretched_length, timing);
  PartyAgent bob(Party::Bob, geometry.unstretched_length, timing);
  TubeAgent tube(config.seed, geometry, timing);
  rubberband::PerParty<std::optional<Bit>> referee_outputs;

  std::priority_queue<Scheduled, std::vector<Scheduled>, Later> queue;
  std::uint64_t sequence = 0;
  auto post = [&](Endpoint from, std::vector<Outgoing> messages) {
    for (auto& m : messages) {
      queue.push(Scheduled{m.tick, from, sequence++, m.to, std::move(m.message)});
    }
  };

  post(Endpoint::Referee, {Outgoing{0.0, Endpoint::Alice, msg::DeliverInput{config.x}},
                           Outgoing{0.0, Endpoint::Bob, msg::DeliverInput{config.y}}});
  queue.push(Scheduled{tube.deadline(), Endpoint::Tube, sequence++, Endpoint::Tube, msg::Sucked{},
                       true});

  Trace trace;
  while (!queue.empty()) {
    Scheduled item = queue.top();
    queue.pop();
    if (item.deadline) {
      post(Endpoint::Tube, tube.resolve(item.tick));
      continue;
    }
    trace.push_back(TraceEvent{item.tick, item.from, item.to, item.message});
    switch (item.to) {
      case Endpoint::Alice: post(Endpoint::Alice, alice.step(item.message, item.tick)); break;
      case Endpoint::Bob: post(Endpoint::Bob, bob.step(item.message, item.tick)); break;
      case Endpoint::Tube: post(Endpoint::Tube, tube.receive(item.from, item.message, item.tick)); break;
      case Endpoint::Referee: {
        const auto* output = std::get_if<msg::Output>(&item.message);
        if (output == nullptr || item.from == Endpoint::Tube || item.from == Endpoint::Referee) {
          throw ProtocolError("referee only accepts outputs from parties");
        }
        referee_outputs[item.from == Endpoint::Alice ? Party::Alice : Party::Bob] = output->output;
        break;
      }
    }
  }

  if (!referee_outputs.alice || !referee_outputs.bob) {
    throw ProtocolError("protocol ended without both outputs");
  }

  rubberband::TrialRecord record;
  record.inputs = {config.x, config.y};
  record.color = tube.color();
  record.geometry = geometry;
  record.band_final = tube.band_state();
  record.outputs = {*referee_outputs.alice, *referee_outputs.bob};
  for (const PartyAgent* agent : {&alice, &bob}) {
    const Party p = agent->role();
    record.pulled[p] = agent->pulled();
    record.l[p] = agent->l();
    record.c[p] = agent->c().value();
    record.piece_length[p] = agent->piece_length();
    record.completion_ticks[p] = agent->completion_tick().value();
  }
  return ProtocolRun{std::move(record), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Audit and export

AuditReport& AuditReport::operator+=(const AuditReport& other) noexcept {
  alice_to_bob_count += other.alice_to_bob_count;
  bob_to_alice_count += other.bob_to_alice_count;
  verdict = alice_to_bob_count == 0 && bob_to_alice_count == 0;
  return *this;
}

AuditReport audit(const Trace& trace) noexcept {
  AuditReport report;
  for (const auto& event : trace) {
    if (event.from == Endpoint::Alice && event.to == Endpoint::Bob) {
      ++report.alice_to_bob_count;
    } else if (event.from == Endpoint::Bob && event.to == Endpoint::Alice) {
      ++report.bob_to_alice_count;
    }
  }
  report.verdict = report.alice_to_bob_count == 0 && report.bob_to_alice_count == 0;
  return report;
}

std::string format_trace_line(const TraceEvent& event, std::uint64_t trial_index) {
  std::string payload = std::visit(
      Overloaded{
          [](const msg::DeliverInput& m) { return "{\"input\":" + std::to_string(m.input.as_int()) + "}"; },
          [](const msg::ReadColor&) { return std::string("{}"); },
          [](const msg::ColorIs& m) { return "{\"color\":" + json_quote(to_string(m.color)) + "}"; },
          [](const msg::Pull&) { return std::string("{}"); },
          [](const msg::PieceDelivered& m) {
            return "{\"length\":" + format_double(m.length) +
                   ",\"color\":" + json_quote(to_string(m.color)) + "}";
          },
          [](const msg::Sucked&) { return std::string("{}"); },
          [](const msg::Output& m) { return "{\"output\":" + std::to_string(m.output.as_int()) + "}"; },
      },
      event.message);
  std::ostringstream line;
  line << "{\"trial\":" << trial_index << ",\"tick\":" << format_double(event.tick)
       << ",\"from\":" << json_quote(to_string(event.from))
       << ",\"to\":" << json_quote(to_string(event.to))
       << ",\"kind\":" << json_quote(kind_name(event.message)) << ",\"payload\":" << payload << "}";
  return line.str();
}

void write_trace(std::ostream& out, const Trace& trace, std::uint64_t trial_index) {
  for (const auto& event : trace) {
    out << format_trace_line(event, trial_index) << '\n';
  }
}

}  // namespace prbox::agents
