// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "prbox/agents.hpp"
#include "prbox/refboxes.hpp"
#include "prbox/runner.hpp"
#include "prbox/rubberband.hpp"
#include "prbox/stats.hpp"

using namespace prbox;

namespace {

constexpr std::uint64_t kTrials1e5 = 100000;
constexpr std::uint64_t kTrials1e6 = 1000000;
constexpr double kMarginalLo = 0.498;
constexpr double kMarginalHi = 0.502;
constexpr double kSignalingTvMax = 0.005;
constexpr double kMiLeakMax = 5e-4;
constexpr std::uint64_t kAgentTrialsMin = 10000;
constexpr std::uint64_t kEquivalenceConfigs = 10000;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %-34s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

unsigned worker_count() { return std::max(1U, std::thread::hardware_concurrency()); }

cli::RunConfig make_config(std::string_view scenario, std::uint64_t trials, std::uint64_t seed) {
  cli::RunConfig c;
  c.scenario = cli::Scenario::parse(scenario);
  c.trials_per_setting = trials;
  c.master_seed = seed;
  c.workers = worker_count();
  return c;
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();

  // 1, 2, 8, 9 share the 10^5-per-setting rubberband run.
  const cli::Report base = cli::run(make_config("rubberband", kTrials1e5, 42));
  std::uint64_t other_seed_violations = 0;
  for (std::uint64_t seed : {0ULL, 1ULL, 0xC0FFEEULL}) {
    other_seed_violations += cli::run(make_config("rubberband", kTrials1e5, seed)).constraint_violations;
  }
  report(1, "NLB constraint exactness",
         base.constraint_violations == 0 && other_seed_violations == 0,
         "violations=" + std::to_string(base.constraint_violations) +
             " (seed 42), " + std::to_string(other_seed_violations) + " (seeds 0,1,0xC0FFEE)");

  report(2, "maximal CHSH", base.chsh == 4.0,
         fmt("chsh=%.17g E00=%.17g E01=%.17g", base.chsh, base.correlators[0], base.correlators[1]) +
             fmt(" E10=%.17g E11=%.17g", base.correlators[2], base.correlators[3]));

  double best_lhv = -4.0;
  for (const auto& strategy : refboxes::enumerate_lhv()) {
    best_lhv = std::max(best_lhv,
                        stats::chsh(refboxes::analytic_behavior(refboxes::LhvBox{strategy}).to_behavior()));
  }
  report(3, "classical bound baseline",
         best_lhv == 2.0 && oracle::best_lhv_chsh() == 2,
         fmt("max lhv chsh=%.17g (brute-force oracle %.0f)", best_lhv, oracle::best_lhv_chsh()));

  // 4, 5 share the 10^6-per-setting run.
  const cli::Report big = cli::run(make_config("rubberband", kTrials1e6, 42));
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& m : big.marginals) {
    lo = std::min({lo, m.alice, m.bob});
    hi = std::max({hi, m.alice, m.bob});
  }
  report(4, "marginal randomness", lo >= kMarginalLo && hi <= kMarginalHi,
         fmt("P(out=1) in [%.6f, %.6f], bound [0.498, 0.502]", lo, hi));

  const double tv = std::max(big.signaling_tv.alice, big.signaling_tv.bob);
  const double mi = std::max(big.mi_leak.alice, big.mi_leak.bob);
  report(5, "no-signaling, statistical", tv <= kSignalingTvMax && mi <= kMiLeakMax,
         fmt("max tv=%.3g (<=0.005) max mi=%.3g bits (<=5e-4)", tv, mi));

  {
    cli::RunConfig c = make_config("agents", kAgentTrialsMin / 4, 42);
    std::uint64_t dirty_trials = 0;
    std::uint64_t traced = 0;
    const cli::Report agents = cli::run(c, [&](const cli::TrialView& v) {
      ++traced;
      if (v.trace == nullptr || !agents::audit(*v.trace).verdict) {
        ++dirty_trials;
      }
    });
    const bool pass = traced >= kAgentTrialsMin && dirty_trials == 0 && agents.audit &&
                      agents.audit->alice_to_bob_count == 0 &&
                      agents.audit->bob_to_alice_count == 0;
    report(6, "no-signaling, structural", pass,
           "trials=" + std::to_string(traced) + " trials_with_contact=" + std::to_string(dirty_trials) +
               " alice->bob=" + std::to_string(agents.audit ? agents.audit->alice_to_bob_count : 0) +
               " bob->alice=" + std::to_string(agents.audit ? agents.audit->bob_to_alice_count : 0));
  }

  {
    SplitMix64 gen(0x5EED5EEDULL);
    std::uint64_t mismatches = 0;
    for (std::uint64_t i = 0; i < kEquivalenceConfigs; ++i) {
      const InputPair s = kAllSettings[gen.next() % 4];
      const rubberband::TrialConfig config{s.alice, s.bob, gen.next(), std::nullopt};
      const rubberband::TimingParams timing{};
      if (!(agents::run_protocol(config, timing).record == rubberband::run_trial(config, timing))) {
        ++mismatches;
      }
    }
    report(7, "oracle equivalence", mismatches == 0,
           "configs=" + std::to_string(kEquivalenceConfigs) + " mismatches=" + std::to_string(mismatches));
  }

  {
    const bool have = base.ks_break_uniformity.has_value();
    const double d = have ? base.ks_break_uniformity->statistic : 1.0;
    const double crit = 1.36 / std::sqrt(static_cast<double>(kTrials1e5));
    const bool pass = have && base.ks_break_uniformity->samples == kTrials1e5 && d < crit;
    report(8, "break-point uniformity", pass, fmt("ks=%.6f < %.6f (n=1e5)", d, crit));
  }

  {
    const auto& t = base.timing_check;
    const auto& tb = big.timing_check;
    const bool pass = t && tb && t->violations == 0 && tb->violations == 0 &&
                      t->trials_checked == kTrials1e5 && tb->trials_checked == kTrials1e6 &&
                      t->min_completion_over_photon_ratio >= 1.0;
    report(9, "timing bound", pass,
           fmt("(1,1) trials checked=%.0f violations=%.0f min finish/photon=%.6f",
               t ? double(t->trials_checked + tb->trials_checked) : 0.0,
               t ? double(t->violations + tb->violations) : 0.0,
               t ? std::min(t->min_completion_over_photon_ratio, tb->min_completion_over_photon_ratio)
                 : 0.0));
  }

  {
    cli::RunConfig c = make_config("rubberband", kTrials1e5, 7);
    c.workers = 1;
    const std::string first = cli::report_json(cli::run(c));
    const std::string second = cli::report_json(cli::run(c));
    bool shard_independent = true;
    for (unsigned workers : {2U, 5U, 8U}) {
      c.workers = workers;
      shard_independent = shard_independent && cli::report_json(cli::run(c)) == first;
    }
    report(10, "determinism", first == second && shard_independent,
           std::string("repeat identical=") + (first == second ? "yes" : "no") +
               " shard-independent=" + (shard_independent ? "yes" : "no"));
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("%d failed, runtime %.2fs\n", failures, seconds);
  return failures == 0 ? 0 : 1;
}
