#pragma once

// The compile / verify / fidelity / sweep pipelines behind holoctl. Each
// returns its files and a short summary instead of touching the filesystem,
// so outputs can be checked byte for byte.

#include <optional>
#include <string>
#include <vector>

#include "holo/pulse_compiler.hpp"
#include "holo/run_config.hpp"

namespace holo {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitVerify = 2, kExitNumeric = 3 };

struct OutputFile {
  std::string name;
  std::string content;
};

struct PipelineResult {
  int exit_code = kExitOk;
  std::string summary;  // for stdout
  std::vector<OutputFile> files;
};

// Compiled schedule with lasers attached wherever a realization exists.
PulseSchedule build_schedule(const RunConfig& config);

std::string export_schedule(const PulseSchedule& schedule, const SystemParams& params, double anchor_rabi);

// Index of the interval carrying area pi (1 for n = 1, n otherwise).
std::size_t main_interval(const GateSpec& spec);

PipelineResult cmd_compile(const RunConfig& config);

struct VerifyOptions {
  std::optional<double> perturb_area;  // fractional change of the main interval's area
  bool timeseries = false;
};
PipelineResult cmd_verify(const RunConfig& config, const VerifyOptions& options = {});

// Throws ConfigError for gates without a full-model realization.
PipelineResult cmd_fidelity(const RunConfig& config, bool timeseries = false);

// Throws ConfigError for an unknown parameter or an invalid value.
PipelineResult cmd_sweep(const RunConfig& config, const std::string& parameter, const std::vector<double>& values);
RunConfig with_sweep_value(RunConfig config, const std::string& parameter, double value);

}  // namespace holo
