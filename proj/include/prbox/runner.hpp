#pragma once

// Scenario runner behind the command-line tool.
//
// A run executes trials_per_setting trials for each of the four input
// settings. Trial i uses setting i % 4 and the sub-seed
// derive_trial_seed(master_seed, i), so results do not depend on how the
// index range is split across workers.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "prbox/agents.hpp"
#include "prbox/rubberband.hpp"
#include "prbox/stats.hpp"

namespace prbox::cli {

enum class ScenarioKind : std::uint8_t { RubberBand, Agents, IdealPr, Lhv };

struct Scenario {
  ScenarioKind kind = ScenarioKind::RubberBand;
  std::size_t lhv_index = 0;

  /// Accepts rubberband, agents, ideal-pr and lhv:<0..15>.
  /// Throws std::invalid_argument otherwise.
  static Scenario parse(std::string_view text);
  std::string name() const;
  /// Whether the scenario runs the band model (break points, timing).
  bool has_band() const noexcept {
    return kind == ScenarioKind::RubberBand || kind == ScenarioKind::Agents;
  }
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class OutputFormat : std::uint8_t { Json, Csv };

struct ModelParams {
  double unstretched_length = 1.0;  // L
  double tube_span = 1.0;           // D
  double tick = 1.0;
  double retraction_speed = 1.0;    // v
  double signal_speed = 1.0;        // c

  rubberband::BandGeometry geometry() const { return {unstretched_length, tube_span}; }
  rubberband::TimingParams timing() const {
    return {tick, 3, retraction_speed, signal_speed};
  }
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct RunConfig {
  Scenario scenario;
  std::uint64_t trials_per_setting = 100000;
  std::uint64_t master_seed = 0;
  OutputFormat output_format = OutputFormat::Json;
  std::optional<std::string> dump_trace;
  ModelParams params;
  /// Execution detail only; never part of the report.
  unsigned workers = 1;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Exit codes shared by the tool and run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;
  /// Help text (exit 0) or the usage error (exit 2).
  std::string message;
};

/// `args` excludes the program name.
ParseResult parse_args(const std::vector<std::string>& args);

struct KsCheck {
  double statistic = 0.0;
  std::uint64_t samples = 0;
  double critical_value_5pct = 0.0;
};

struct TimingCheck {
  double min_completion_over_photon_ratio = 0.0;
  std::uint64_t violations = 0;
  std::uint64_t trials_checked = 0;
};

struct Report {
  RunConfig config;
  stats::JointCounts counts;
  stats::Behavior behavior;
  /// Indexed by setting_index: (0,0), (0,1), (1,0), (1,1).
  std::array<double, 4> correlators{};
  double chsh = 0.0;
  std::array<rubberband::PerParty<double>, 4> marginals{};
  /// Keyed by receiving party: bob holds the Alice -> Bob figure.
  rubberband::PerParty<double> signaling_tv;
  rubberband::PerParty<double> mi_leak;
  std::uint64_t constraint_violations = 0;
  std::optional<KsCheck> ks_break_uniformity;
  std::optional<TimingCheck> timing_check;
  std::optional<agents::AuditReport> audit;

  int exit_code() const noexcept;
};

/// Per-trial observation, delivered in trial-index order.
struct TrialView {
  std::uint64_t index = 0;
  InputPair inputs;
  OutputPair outputs;
  const rubberband::TrialRecord* record = nullptr;  // band scenarios only
  const agents::Trace* trace = nullptr;             // agents scenario only
};

using TrialObserver = std::function<void(const TrialView&)>;

/// Runs the configured scenario. With an observer the run is single-threaded
/// so the callback sees trials in order.
Report run(const RunConfig& config, const TrialObserver& observer = {});

/// Fixed-key JSON, doubles at 17 significant digits, trailing newline.
std::string report_json(const Report& report);

inline constexpr std::string_view kCsvHeader =
    "trial_index,x,y,color,pulled_a,pulled_b,break_point,l_a,l_b,c_a,c_b,out_a,out_b,t_a,t_b";

/// One CSV row; band columns are empty for box scenarios.
std::string csv_row(const TrialView& view);

}  // namespace prbox::cli
