#pragma once

// Run configuration for the holoctl pipelines.
//
// Unit convention: every frequency in a config file is plain Hz (cycles per
// second) and is multiplied by 2 pi exactly once, when the file is read.
// Decay rates are given per second (no 2 pi), or through the excited-state
// lifetime tau_f, which sets gamma_e0 = gamma_e1 = 1 / (2 tau_f). Angles
// accept simple expressions in pi ("pi/2", "3*pi/4", "-0.25*pi").

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "holo/full_sim.hpp"
#include "holo/gate_targets.hpp"
#include "holo/pulse_compiler.hpp"
#include "holo/text_format.hpp"

namespace holo {

struct DriveConfig {
  double laser_rabi = 0.0;               // anchor laser Rabi frequency, rad/s
  std::optional<double> drive;           // W, rad/s
  std::optional<double> outer_coupling;  // |W11| of the first and last intervals, rad/s
  std::optional<double> middle_coupling; // V of single-coupling middle intervals, rad/s
};

struct NumericsConfig {
  std::optional<double> dt;  // s; default (2 pi / delta) / steps_per_period
  std::size_t steps_per_period = 50;
  std::size_t grid_points = 200;
  double cyclicity_tol = 1e-9;
  double transport_tol = 1e-9;
  double gate_error_tol = 1e-8;
  double abort_tolerance = 1e-4;
};

struct IoConfig {
  std::string out_dir = "out";
  bool emit_timeseries = false;
  std::size_t sample_every = 250;  // integration steps between time-series rows
};

struct FidelityConfig {
  std::string initial_state;  // computational bit string; default 1..10
  Model model = Model::full;
  Method method = Method::density_matrix;
  bool effective_diagnostic = true;  // also report the effective model with decay
};

struct SweepConfig {
  std::string parameter;
  std::vector<double> values;  // in config units (Hz, s, or integers)
};

struct RunConfig {
  GateSpec gate;
  SystemParams physics;
  DriveConfig drive;
  NumericsConfig numerics;
  IoConfig io;
  FidelityConfig fidelity;
  SweepConfig sweep;
  std::size_t table_max_n = 10;

  // Effective pair coupling of two lasers at the anchor Rabi: eta^2 R^2 / delta.
  double pair_coupling() const;
  double resolved_drive() const;  // default sqrt(2) * pair coupling
  CompileOptions compile_options() const;
  double resolved_dt() const;
  std::string resolved_initial_state() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig parse_config(const KeyValueDocument& doc);
RunConfig load_config(const std::string& path);

// The config with every default made explicit, in config units. Parsing the
// text back gives an equivalent configuration.
std::string resolved_config_text(const RunConfig& config);

// Evaluates "pi/2", "3*pi/4", "0.7", "-pi". Throws std::invalid_argument.
double parse_angle(std::string_view text);

// "110" -> qubit basis state of dimension 2^len.
StateVector basis_from_bits(std::string_view bits);

std::string_view to_string(Model m);
std::string_view to_string(Method m);

}  // namespace holo
