#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "prbox/agents.hpp"
#include "prbox/format.hpp"
#include "prbox/runner.hpp"

int main(int argc, char** argv) {
  using namespace prbox;

  std::vector<std::string> args(argv + 1, argv + argc);
  const cli::ParseResult parsed = cli::parse_args(args);
  if (!parsed.config) {
    (parsed.exit_code == cli::kExitOk ? std::cout : std::cerr) << parsed.message << '\n';
    return parsed.exit_code;
  }
  const cli::RunConfig& config = *parsed.config;

  std::ofstream trace_file;
  if (config.dump_trace) {
    trace_file.open(*config.dump_trace);
    if (!trace_file) {
      std::cerr << "cannot open trace file " << *config.dump_trace << '\n';
      return cli::kExitUsage;
    }
  }
  const bool csv = config.output_format == cli::OutputFormat::Csv;

  cli::TrialObserver observer;
  if (csv || config.dump_trace) {
    if (csv) {
      std::cout << cli::kCsvHeader << '\n';
    }
    observer = [&](const cli::TrialView& view) {
      if (csv) {
        std::cout << cli::csv_row(view) << '\n';
      }
      if (trace_file.is_open() && view.trace != nullptr) {
        agents::write_trace(trace_file, *view.trace, view.index);
      }
    };
  }

  try {
    const cli::Report report = cli::run(config, observer);
    if (csv) {
      std::cerr << "chsh=" << format_double(report.chsh)
                << " constraint_violations=" << report.constraint_violations << '\n';
    } else {
      std::cout << cli::report_json(report);
    }
    return report.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitCheckFailed;
  }
}
