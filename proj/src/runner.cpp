#include "prbox/runner.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "prbox/format.hpp"
#include "prbox/refboxes.hpp"

namespace prbox::cli {

namespace {

constexpr Bit kBits[2] = {Bit::zero(), Bit::one()};

struct ShardResult {
  stats::JointCounts counts;
  std::uint64_t constraint_violations = 0;
  std::vector<double> break_points;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::uint64_t timing_violations = 0;
  std::uint64_t timing_checked = 0;
  agents::AuditReport audit;

  void merge(ShardResult&& other) {
    counts += other.counts;
    constraint_violations += other.constraint_violations;
    break_points.insert(break_points.end(), other.break_points.begin(), other.break_points.end());
    min_ratio = std::min(min_ratio, other.min_ratio);
    timing_violations += other.timing_violations;
    timing_checked += other.timing_checked;
    audit += other.audit;
  }
};

void check_band_trial(const rubberband::TrialRecord& record,
                      const rubberband::TimingParams& timing, ShardResult& out) {
  if (const auto* broken = std::get_if<rubberband::Broken>(&record.band_final)) {
    out.break_points.push_back(broken->break_point);
  }
  if (!(record.inputs.alice.as_bool() && record.inputs.bob.as_bool())) {
    return;
  }
  const auto distances = rubberband::retraction_distances(record);
  const double span = record.geometry.tube_span;
  const double farthest = std::max(distances.alice.value(), distances.bob.value());
  const double finish = std::max(record.completion_ticks.alice, record.completion_ticks.bob);
  const double photon = timing.photon_arm_time(span);
  ++out.timing_checked;
  if (farthest < span / 2.0 || finish < photon) {
    ++out.timing_violations;
  }
  out.min_ratio = std::min(out.min_ratio, finish / photon);
}

ShardResult run_range(const RunConfig& config, std::uint64_t begin, std::uint64_t end,
                      const TrialObserver* observer) {
  ShardResult out;
  const auto geometry = config.params.geometry();
  const auto timing = config.params.timing();

  std::unique_ptr<refboxes::Box> box;
  if (config.scenario.kind == ScenarioKind::IdealPr) {
    box = std::make_unique<refboxes::IdealPrBox>();
  } else if (config.scenario.kind == ScenarioKind::Lhv) {
    box = std::make_unique<refboxes::LhvBox>(refboxes::enumerate_lhv().at(config.scenario.lhv_index));
  }

  for (std::uint64_t index = begin; index < end; ++index) {
    TrialView view;
    view.index = index;
    std::optional<rubberband::TrialRecord> record;
    std::optional<agents::Trace> trace;

    switch (config.scenario.kind) {
      case ScenarioKind::RubberBand:
        record = rubberband::run_trial(
            rubberband::batch_trial_config(config.master_seed, index, geometry), timing);
        break;
      case ScenarioKind::Agents: {
        auto protocol = agents::run_protocol(
            rubberband::batch_trial_config(config.master_seed, index, geometry), timing);
        out.audit += agents::audit(protocol.trace);
        record = std::move(protocol.record);
        trace = std::move(protocol.trace);
        break;
      }
      case ScenarioKind::IdealPr:
      case ScenarioKind::Lhv: {
        const InputPair setting = kAllSettings[index % 4];
        SplitMix64 rng(derive_trial_seed(config.master_seed, index));
        view.inputs = setting;
        view.outputs = box->sample(setting.alice, setting.bob, rng);
        break;
      }
    }

    if (record) {
      view.inputs = record->inputs;
      view.outputs = record->outputs;
      view.record = &*record;
      check_band_trial(*record, timing, out);
    }
    if (trace) {
      view.trace = &*trace;
    }
    out.counts.add(view.inputs, view.outputs);
    if (!nlb_constraint(view.inputs, view.outputs)) {
      ++out.constraint_violations;
    }
    if (observer != nullptr && *observer) {
      (*observer)(view);
    }
  }
  return out;
}

std::string setting_key(Bit x, Bit y) {
  return "x" + std::to_string(x.as_int()) + "y" + std::to_string(y.as_int());
}

std::string optional_bit(const std::optional<Bit>& bit) {
  return bit ? std::to_string(bit->as_int()) : std::string();
}

std::string optional_double(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

Scenario Scenario::parse(std::string_view text) {
  if (text == "rubberband") {
    return {ScenarioKind::RubberBand, 0};
  }
  if (text == "agents") {
    return {ScenarioKind::Agents, 0};
  }
  if (text == "ideal-pr") {
    return {ScenarioKind::IdealPr, 0};
  }
  constexpr std::string_view prefix = "lhv:";
  if (text.starts_with(prefix)) {
    const std::string_view digits = text.substr(prefix.size());
    if (digits.empty() || digits.size() > 2 ||
        !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw std::invalid_argument("lhv index must be an integer in 0..15");
    }
    const std::size_t index = std::stoul(std::string(digits));
    if (index > 15) {
      throw std::invalid_argument("lhv index must be an integer in 0..15");
    }
    return {ScenarioKind::Lhv, index};
  }
  throw std::invalid_argument("unknown scenario '" + std::string(text) +
                              "' (expected rubberband, agents, ideal-pr or lhv:<0..15>)");
}

std::string Scenario::name() const {
  switch (kind) {
    case ScenarioKind::RubberBand: return "rubberband";
    case ScenarioKind::Agents: return "agents";
    case ScenarioKind::IdealPr: return "ideal-pr";
    case ScenarioKind::Lhv: return "lhv:" + std::to_string(lhv_index);
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (trials_per_setting < 1) {
    throw std::invalid_argument("--trials must be at least 1");
  }
  if (scenario.kind == ScenarioKind::Lhv && scenario.lhv_index > 15) {
    throw std::invalid_argument("lhv index must be in 0..15");
  }
  if (dump_trace && scenario.kind != ScenarioKind::Agents) {
    throw std::invalid_argument("--dump-trace requires --scenario agents");
  }
  if (workers < 1) {
    throw std::invalid_argument("--workers must be at least 1");
  }
  params.geometry().validate();
  params.timing().validate();
}

ParseResult parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Rubber-band non-local box simulator and verification harness", "prbox"};
  RunConfig config;
  std::string scenario = "rubberband";
  std::string format = "json";
  std::string trace_path;

  app.add_option("--scenario", scenario, "rubberband | agents | ideal-pr | lhv:<0..15>");
  app.add_option("--trials", config.trials_per_setting, "Trials per input setting");
  app.add_option("--seed", config.master_seed, "Master 64-bit seed");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--dump-trace", trace_path, "Write the agents message trace (JSON lines)");
  app.add_option("--L", config.params.unstretched_length, "Unstretched band length");
  app.add_option("--D", config.params.tube_span, "Tube span (Alice-Bob distance)");
  app.add_option("--tick", config.params.tick, "Duration of one count");
  app.add_option("--v", config.params.retraction_speed, "Band retraction speed");
  app.add_option("--c", config.params.signal_speed, "Signal (photon) speed");
  app.add_option("--workers", config.workers, "Worker threads (does not affect results)");

  // CLI11 consumes the vector from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return {std::nullopt, kExitOk, app.help()};
  } catch (const CLI::ParseError& e) {
    return {std::nullopt, kExitUsage, e.what()};
  }

  try {
    config.scenario = Scenario::parse(scenario);
    config.output_format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    if (app.count("--dump-trace") > 0) {
      config.dump_trace = trace_path;
    }
    config.validate();
  } catch (const std::invalid_argument& e) {
    return {std::nullopt, kExitUsage, e.what()};
  }
  return {config, kExitOk, {}};
}

// ---------------------------------------------------------------------------
// Running

int Report::exit_code() const noexcept {
  if (constraint_violations != 0) {
    return kExitCheckFailed;
  }
  if (audit && !audit->verdict) {
    return kExitCheckFailed;
  }
  return kExitOk;
}

Report run(const RunConfig& config, const TrialObserver& observer) {
  config.validate();
  const std::uint64_t total = config.trials_per_setting * 4;

  ShardResult merged;
  if (observer || config.workers <= 1) {
    merged = run_range(config, 0, total, &observer);
  } else {
    const std::uint64_t shards = std::min<std::uint64_t>(config.workers, total);
    std::vector<ShardResult> results(shards);
    std::vector<std::thread> threads;
    threads.reserve(shards);
    for (std::uint64_t s = 0; s < shards; ++s) {
      const std::uint64_t begin = total * s / shards;
      const std::uint64_t end = total * (s + 1) / shards;
      threads.emplace_back([&, s, begin, end] { results[s] = run_range(config, begin, end, nullptr); });
    }
    for (auto& t : threads) {
      t.join();
    }
    for (auto& r : results) {
      merged.merge(std::move(r));
    }
  }

  Report report;
  report.config = config;
  report.counts = merged.counts;
  report.behavior = stats::behavior_from_counts(merged.counts);
  for (const InputPair s : kAllSettings) {
    const std::size_t i = setting_index(s);
    report.correlators[i] = stats::correlator(report.behavior, s.alice, s.bob);
    report.marginals[i].alice = stats::marginal(merged.counts, Party::Alice, s.alice, s.bob);
    report.marginals[i].bob = stats::marginal(merged.counts, Party::Bob, s.alice, s.bob);
  }
  report.chsh = stats::chsh(report.behavior);
  for (Party receiver : {Party::Alice, Party::Bob}) {
    report.signaling_tv[receiver] = stats::signaling_tv(report.behavior, receiver);
    report.mi_leak[receiver] = stats::mutual_information_leak(merged.counts, receiver);
  }
  report.constraint_violations = merged.constraint_violations;

  if (config.scenario.has_band()) {
    if (merged.break_points.size() >= 2) {
      report.ks_break_uniformity = KsCheck{
          stats::ks_uniform(merged.break_points, 0.0, config.params.unstretched_length),
          merged.break_points.size(), stats::ks_critical_value_5pct(merged.break_points.size())};
    }
    report.timing_check =
        TimingCheck{merged.min_ratio, merged.timing_violations, merged.timing_checked};
  }
  if (config.scenario.kind == ScenarioKind::Agents) {
    report.audit = merged.audit;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Output

std::string report_json(const Report& r) {
  const auto& c = r.config;
  std::ostringstream out;
  out << "{\n";
  out << "  \"config\": {\"scenario\": " << json_quote(c.scenario.name())
      << ", \"trials_per_setting\": " << c.trials_per_setting
      << ", \"master_seed\": " << c.master_seed << ", \"output_format\": "
      << (c.output_format == OutputFormat::Json ? "\"json\"" : "\"csv\"")
      << ", \"dump_trace\": " << (c.dump_trace ? "true" : "false") << ", \"params\": {\"L\": "
      << format_double(c.params.unstretched_length) << ", \"D\": "
      << format_double(c.params.tube_span) << ", \"tick\": " << format_double(c.params.tick)
      << ", \"v\": " << format_double(c.params.retraction_speed)
      << ", \"c\": " << format_double(c.params.signal_speed) << "}},\n";

  out << "  \"behavior\": {";
  for (const InputPair s : kAllSettings) {
    out << (setting_index(s) == 0 ? "" : ", ") << json_quote(setting_key(s.alice, s.bob)) << ": {";
    bool first = true;
    for (Bit a : kBits) {
      for (Bit b : kBits) {
        out << (first ? "" : ", ") << "\"p" << a.as_int() << b.as_int()
            << "\": " << format_double(r.behavior.at(s.alice, s.bob, a, b));
        first = false;
      }
    }
    out << "}";
  }
  out << "},\n";

  out << "  \"correlators\": {";
  for (const InputPair s : kAllSettings) {
    out << (setting_index(s) == 0 ? "" : ", ") << "\"e" << s.alice.as_int() << s.bob.as_int()
        << "\": " << format_double(r.correlators[setting_index(s)]);
  }
  out << "},\n";
  out << "  \"chsh\": " << format_double(r.chsh) << ",\n";

  out << "  \"marginals\": {";
  for (const InputPair s : kAllSettings) {
    const auto& m = r.marginals[setting_index(s)];
    out << (setting_index(s) == 0 ? "" : ", ") << json_quote(setting_key(s.alice, s.bob))
        << ": {\"alice\": " << format_double(m.alice) << ", \"bob\": " << format_double(m.bob)
        << "}";
  }
  out << "},\n";

  out << "  \"signaling_tv\": {\"alice_to_bob\": " << format_double(r.signaling_tv.bob)
      << ", \"bob_to_alice\": " << format_double(r.signaling_tv.alice) << "},\n";
  out << "  \"mi_leak\": {\"alice_to_bob\": " << format_double(r.mi_leak.bob)
      << ", \"bob_to_alice\": " << format_double(r.mi_leak.alice) << "},\n";
  out << "  \"constraint_violations\": " << r.constraint_violations << ",\n";

  out << "  \"ks_break_uniformity\": ";
  if (r.ks_break_uniformity) {
    const auto& ks = *r.ks_break_uniformity;
    out << "{\"statistic\": " << format_double(ks.statistic) << ", \"samples\": " << ks.samples
        << ", \"critical_value_5pct\": " << format_double(ks.critical_value_5pct) << "}";
  } else {
    out << "null";
  }
  out << ",\n";

  out << "  \"timing_check\": ";
  if (r.timing_check) {
    const auto& t = *r.timing_check;
    out << "{\"min_completion_over_photon_ratio\": "
        << format_double(t.min_completion_over_photon_ratio) << ", \"violations\": " << t.violations
        << ", \"trials_checked\": " << t.trials_checked << "}";
  } else {
    out << "null";
  }
  out << ",\n";

  out << "  \"audit\": ";
  if (r.audit) {
    out << "{\"alice_to_bob_count\": " << r.audit->alice_to_bob_count
        << ", \"bob_to_alice_count\": " << r.audit->bob_to_alice_count
        << ", \"verdict\": " << (r.audit->verdict ? "true" : "false") << "}";
  } else {
    out << "null";
  }
  out << "\n}\n";
  return out.str();
}

std::string csv_row(const TrialView& view) {
  std::ostringstream out;
  out << view.index << ',' << view.inputs.alice.as_int() << ',' << view.inputs.bob.as_int() << ',';
  if (const auto* rec = view.record) {
    std::optional<double> break_point;
    if (const auto* broken = std::get_if<rubberband::Broken>(&rec->band_final)) {
      break_point = broken->break_point;
    }
    out << to_string(rec->color) << ',' << (rec->pulled.alice ? 1 : 0) << ','
        << (rec->pulled.bob ? 1 : 0) << ',' << optional_double(break_point) << ','
        << optional_bit(rec->l.alice) << ',' << optional_bit(rec->l.bob) << ','
        << rec->c.alice.as_int() << ',' << rec->c.bob.as_int() << ',';
  } else {
    out << ",,,,,,,,";
  }
  out << view.outputs.alice.as_int() << ',' << view.outputs.bob.as_int() << ',';
  if (const auto* rec = view.record) {
    out << format_double(rec->completion_ticks.alice) << ','
        << format_double(rec->completion_ticks.bob);
  } else {
    out << ',';
  }
  return out.str();
}

}  // namespace prbox::cli
