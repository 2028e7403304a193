#include <doctest.h>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "prbox/agents.hpp"

using namespace prbox;
using namespace prbox::agents;
using rubberband::TimingParams;
using rubberband::TrialConfig;

namespace {

constexpr Bit O = Bit::zero();
constexpr Bit I = Bit::one();

std::size_t count_kind(const Trace& trace, std::string_view kind) {
  return static_cast<std::size_t>(std::count_if(trace.begin(), trace.end(), [&](const TraceEvent& e) {
    return kind_name(e.message) == kind;
  }));
}

}  // namespace

TEST_CASE("party: color reader") {
  PartyAgent alice(Party::Alice, 1.0, TimingParams{});
  auto out = alice.step(msg::DeliverInput{O}, 0.0);
  REQUIRE(out.size() == 1);
  CHECK(out[0].to == Endpoint::Tube);
  CHECK(std::holds_alternative<msg::ReadColor>(out[0].message));
  CHECK(out[0].tick == 0.0);

  out = alice.step(msg::ColorIs{Color::Yellow}, 0.0);
  REQUIRE(out.size() == 1);
  CHECK(out[0].to == Endpoint::Referee);
  CHECK(std::get<msg::Output>(out[0].message).output == I);
  CHECK(alice.phase() == PartyAgent::Phase::Done);
  CHECK(alice.completion_tick() == 0.0);
}

TEST_CASE("party: puller counts to three, then reads its piece") {
  PartyAgent bob(Party::Bob, 1.0, TimingParams{});
  auto out = bob.step(msg::DeliverInput{I}, 0.0);
  REQUIRE(out.size() == 1);
  CHECK(std::holds_alternative<msg::Pull>(out[0].message));
  CHECK(out[0].tick == 3.0);
  CHECK(bob.pulled());

  out = bob.step(msg::PieceDelivered{1.0, Color::Red}, 4.0);
  REQUIRE(out.size() == 1);
  CHECK(std::get<msg::Output>(out[0].message).output == O);
  CHECK(bob.l() == I);
  CHECK(bob.c() == O);
  CHECK(bob.completion_tick() == 4.0);
}

TEST_CASE("party: rejects messages its state cannot accept") {
  PartyAgent alice(Party::Alice, 1.0, TimingParams{});
  CHECK_THROWS_AS(alice.step(msg::ColorIs{Color::Red}, 0.0), ProtocolError);
  alice.step(msg::DeliverInput{I}, 0.0);
  CHECK_THROWS_AS(alice.step(msg::ColorIs{Color::Red}, 0.0), ProtocolError);
  CHECK_THROWS_AS(alice.step(msg::Sucked{}, 3.0), ProtocolError);
}

TEST_CASE("tube: resolution by number of pulls") {
  const TimingParams timing{};
  const rubberband::BandGeometry geometry{1.0, 1.0};

  SUBCASE("two pulls break the band") {
    TubeAgent tube(11, geometry, timing);
    tube.receive(Endpoint::Alice, msg::Pull{}, 3.0);
    tube.receive(Endpoint::Bob, msg::Pull{}, 3.0);
    const auto out = tube.resolve(3.0);
    REQUIRE(out.size() == 2);
    const auto& pa = std::get<msg::PieceDelivered>(out[0].message);
    const auto& pb = std::get<msg::PieceDelivered>(out[1].message);
    CHECK(out[0].to == Endpoint::Alice);
    CHECK(out[1].to == Endpoint::Bob);
    CHECK(pa.length + pb.length == doctest::Approx(1.0));
    CHECK(out[0].tick == 3.0 + pa.length);
    CHECK(std::holds_alternative<rubberband::Broken>(tube.band_state()));
  }
  SUBCASE("only Bob pulls") {
    TubeAgent tube(11, geometry, timing);
    tube.receive(Endpoint::Bob, msg::Pull{}, 3.0);
    const auto out = tube.resolve(3.0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].to == Endpoint::Bob);
    CHECK(std::get<msg::PieceDelivered>(out[0].message) == msg::PieceDelivered{1.0, tube.color()});
  }
  SUBCASE("sole pullers are treated alike") {
    TubeAgent left(11, geometry, timing);
    TubeAgent right(11, geometry, timing);
    left.receive(Endpoint::Alice, msg::Pull{}, 3.0);
    right.receive(Endpoint::Bob, msg::Pull{}, 3.0);
    const auto a = left.resolve(3.0);
    const auto b = right.resolve(3.0);
    CHECK(a[0].tick == b[0].tick);
    CHECK(a[0].message == b[0].message);
  }
  SUBCASE("no pulls: suction at the deadline") {
    TubeAgent tube(11, geometry, timing);
    const auto out = tube.resolve(3.0);
    REQUIRE(out.size() == 2);
    CHECK(std::holds_alternative<msg::Sucked>(out[0].message));
    CHECK(out[0].tick == 3.0);
    CHECK_THROWS_AS(tube.receive(Endpoint::Alice, msg::Pull{}, 3.5), ProtocolError);
  }
  SUBCASE("color reads are answered at once") {
    TubeAgent tube(11, geometry, timing);
    const auto out = tube.receive(Endpoint::Alice, msg::ReadColor{}, 0.0);
    REQUIRE(out.size() == 1);
    CHECK(std::get<msg::ColorIs>(out[0].message).color == tube.color());
  }
}

TEST_CASE("run_protocol: trace shapes") {
  const TimingParams timing{};

  SUBCASE("(0,0) has no pulls and ends in suction") {
    const auto run = run_protocol(TrialConfig{O, O, 9, std::nullopt}, timing);
    CHECK(count_kind(run.trace, "pull") == 0);
    CHECK(count_kind(run.trace, "sucked") == 2);
    CHECK(std::holds_alternative<rubberband::Sucked>(run.record.band_final));
  }
  SUBCASE("(1,0) Bob's color arrives before the tick-3 resolution") {
    const auto run = run_protocol(TrialConfig{I, O, 9, std::nullopt}, timing);
    const auto color_it = std::find_if(run.trace.begin(), run.trace.end(), [](const TraceEvent& e) {
      return e.to == Endpoint::Bob && std::holds_alternative<msg::ColorIs>(e.message);
    });
    const auto piece_it = std::find_if(run.trace.begin(), run.trace.end(), [](const TraceEvent& e) {
      return std::holds_alternative<msg::PieceDelivered>(e.message);
    });
    REQUIRE(color_it != run.trace.end());
    REQUIRE(piece_it != run.trace.end());
    CHECK(color_it < piece_it);
    CHECK(color_it->tick < 3.0);
  }
  SUBCASE("no pull goes out before the count of three") {
    for (const InputPair s : kAllSettings) {
      const auto run = run_protocol(TrialConfig{s.alice, s.bob, 17, std::nullopt}, timing);
      for (const auto& e : run.trace) {
        if (std::holds_alternative<msg::Pull>(e.message)) {
          CHECK(e.tick >= 3.0);
        }
      }
    }
  }
}

TEST_CASE("property: protocol matches the trial engine and never lets the parties talk") {
  SplitMix64 gen(2718281828ULL);
  for (int i = 0; i < 10000; ++i) {
    const InputPair s = kAllSettings[gen.next() % 4];
    std::optional<rubberband::BandGeometry> geometry;
    TimingParams timing{};
    if (i % 2 == 1) {
      const double length = 0.5 + 5.0 * gen.uniform_open01();
      geometry = rubberband::BandGeometry{length, length * (1.0 + gen.uniform_open01())};
      timing = TimingParams{0.2 + gen.uniform_open01(), 3, 0.9 * gen.uniform_open01() + 0.05, 1.0};
    }
    const TrialConfig config{s.alice, s.bob, gen.next(), geometry};
    const auto run = run_protocol(config, timing);
    REQUIRE(run.record == rubberband::run_trial(config, timing));
    REQUIRE(audit(run.trace).verdict);
    REQUIRE(std::is_sorted(run.trace.begin(), run.trace.end(),
                           [](const TraceEvent& a, const TraceEvent& b) { return a.tick < b.tick; }));
  }
}

TEST_CASE("audit") {
  CHECK(audit({}) == AuditReport{0, 0, true});

  Trace forged{TraceEvent{0.0, Endpoint::Alice, Endpoint::Bob, msg::Output{I}}};
  const auto report = audit(forged);
  CHECK_FALSE(report.verdict);
  CHECK(report.alice_to_bob_count == 1);
  CHECK(report.bob_to_alice_count == 0);

  forged.push_back(TraceEvent{1.0, Endpoint::Bob, Endpoint::Alice, msg::Pull{}});
  CHECK(audit(forged).bob_to_alice_count == 1);
}

TEST_CASE("trace export: one JSON object per line") {
  const auto run = run_protocol(TrialConfig{I, I, 4, std::nullopt}, TimingParams{});
  std::ostringstream out;
  write_trace(out, run.trace, 12);
  std::istringstream lines(out.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto& event = run.trace[n];
    CHECK(j.at("trial") == 12);
    CHECK(j.at("tick").get<double>() == event.tick);
    CHECK(j.at("from") == std::string(to_string(event.from)));
    CHECK(j.at("to") == std::string(to_string(event.to)));
    CHECK(j.at("kind") == std::string(kind_name(event.message)));
    if (const auto* piece = std::get_if<msg::PieceDelivered>(&event.message)) {
      CHECK(j.at("payload").at("length").get<double>() == piece->length);
    }
    ++n;
  }
  CHECK(n == run.trace.size());
}
