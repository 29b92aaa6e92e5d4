// cli.hpp - command-line front end. Kept as a library so tests can run
// commands in-process.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adlab::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kVerificationFailed = 4 };

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string command;
  std::string model = "ising";
  std::vector<int> sizes;
  std::vector<double> fields;
  double gamma = 0.0;
  std::vector<double> tau0;
  std::optional<double> target_f;
  double dt = 0.0;  // <= 0 selects the default step
  double tau_max = 1e6;  // upper end of the tau0* search
  OutputFormat format = OutputFormat::Csv;
  std::string output;
  std::string plot;
  std::string input;
  std::string path = "auto";  // quench: auto | ff | ed
  bool windowed = false;
  bool inject_fault = false;
  int threads = 0;  // 0 keeps the OpenMP default
};

/// Parses argv (argv[0] is skipped) and runs the selected command. Data goes
/// to --output when given, otherwise to `out`; the summary goes to `out` when
/// an output file is used and to `err` otherwise. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already parsed configuration.
int run_config(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace adlab::cli
