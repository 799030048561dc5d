// Subcommand runners. Each writes its artifacts under cfg.out and returns an
// ExitCode; HypothesisError and ConfigError propagate to the caller.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace latbump::cli {

struct RunResult {
  int code = kPass;
  /// deterministic report (no timestamps)
  nlohmann::json report;
};

RunResult cmd_synth(const ExperimentConfig& cfg);
RunResult cmd_decompose(const ExperimentConfig& cfg);
RunResult cmd_opnorm(const ExperimentConfig& cfg);
RunResult cmd_transfer(const ExperimentConfig& cfg);
RunResult cmd_scaling(const ExperimentConfig& cfg);

struct SelftestOptions {
  std::uint64_t seed = 42;
  /// forced window outer radius; values outside (1/2, 1) break the partition of unity
  double window_outer = 0.6;
  int threads = 0;
};

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// search trace rows depend on the seed; identity rows never do
  bool trace = false;
  std::string note;
};

std::vector<CheckRow> selftest_rows(const SelftestOptions& opt);
RunResult cmd_selftest(const SelftestOptions& opt, const std::string& out, std::ostream& log);

/// Writes `<out>/<name>` with a trailing newline.
void write_json(const std::string& out, const std::string& name, const nlohmann::json& j);

/// Asserted number: {"value", "tolerance", "relation", "pass"}; `upper` selects value <= tol, else value >= tol.
nlohmann::json checked(double value, double tolerance, bool upper = true);

}  // namespace latbump::cli
