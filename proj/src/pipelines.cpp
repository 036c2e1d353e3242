#include "holo/pipelines.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "holo/effective_sim.hpp"
#include "holo/full_sim.hpp"
#include "holo/kernels.hpp"
#include "holo/text_format.hpp"

namespace holo {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string bits_of(std::size_t index, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t k = 0; k < width; ++k)
    if (index >> (width - 1 - k) & 1) s[k] = '1';
  return s;
}

std::string header(const RunConfig& config, std::string_view title) {
  std::string out = "# " + std::string(title) + "\n";
  out += as_comment_block(resolved_config_text(config));
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  return row + "\n";
}

void require_full_model(const RunConfig& config) {
  if (config.fidelity.model == Model::full && config.gate.num_controls > 2)
    throw ConfigError("effective-only gate: the full model is undefined for " +
                      std::to_string(config.gate.num_controls) + " controls (available for 1 or 2)");
}

FidelityRequest request_for(const RunConfig& config) {
  FidelityRequest rq;
  rq.model = config.fidelity.model;
  rq.method = config.fidelity.method;
  rq.evolve.dt = config.resolved_dt();
  rq.evolve.abort_tolerance = config.numerics.abort_tolerance;
  return rq;
}

FidelityRun run_config_fidelity(const RunConfig& config, const PulseSchedule& schedule, FidelityRequest rq) {
  try {
    return run_fidelity(schedule, config.physics, basis_from_bits(config.resolved_initial_state()), rq);
  } catch (const EffectiveOnlyError& e) {
    throw ConfigError(std::string("effective-only schedule: ") + e.what());
  }
}

}  // namespace

PulseSchedule build_schedule(const RunConfig& config) {
  PulseSchedule s = compile(config.gate, config.resolved_drive(), config.compile_options());
  attach_lasers(s, config.physics, config.drive.laser_rabi);
  return s;
}

std::size_t main_interval(const GateSpec& spec) { return spec.num_controls == 1 ? 1 : spec.num_controls; }

std::string export_schedule(const PulseSchedule& schedule, const SystemParams& params, double anchor_rabi) {
  DocumentWriter w;
  w.section("gate");
  w.put("num_controls", schedule.spec.num_controls);
  w.put("theta", schedule.spec.axis.theta);
  w.put("phi", schedule.spec.axis.phi);
  w.put("drive_rad_s", schedule.drive);
  w.put("num_intervals", schedule.intervals.size());
  w.put("total_duration_s", schedule.total_duration());
  for (const auto& iv : schedule.intervals) {
    const std::string p = "interval." + std::to_string(iv.index);
    w.section(p);
    w.put("ions", std::to_string(iv.ions.first) + ", " + std::to_string(iv.ions.second));
    w.put("pulse_area_rad", iv.pulse_area);
    w.put("duration_s", iv.duration);
    w.put("couplings", iv.couplings.size());
    for (std::size_t k = 0; k < iv.couplings.size(); ++k) {
      const std::string c = "coupling." + std::to_string(k + 1) + ".";
      w.put(c + "kind", to_string(iv.couplings[k].kind));
      w.put(c + "re_rad_s", iv.couplings[k].amplitude.real());
      w.put(c + "im_rad_s", iv.couplings[k].amplitude.imag());
    }
    if (!iv.lasers) {
      w.put("lasers", "effective-only");
      continue;
    }
    w.put("lasers", iv.lasers->size());
    const LaserRealization real = realize_lasers(iv, params, anchor_rabi);
    w.put("detuning_ratio", real.detuning_ratio);
    w.put("large_detuning_warning", real.large_detuning_warning);
    for (std::size_t k = 0; k < iv.lasers->size(); ++k) {
      const LaserPulse& l = (*iv.lasers)[k];
      const std::string c = "laser." + std::to_string(k + 1) + ".";
      w.put(c + "ion", l.ion);
      w.put(c + "transition", to_string(l.transition));
      w.put(c + "sideband", to_string(l.sideband));
      w.put(c + "detuning", l.detuning_label());
      w.put(c + "rabi_rad_s", l.rabi);
      w.put(c + "phase_sign", l.phase_sign);
    }
  }
  return w.str();
}

PipelineResult cmd_compile(const RunConfig& config) {
  const PulseSchedule s = build_schedule(config);
  PipelineResult out;
  const std::string schedule_text = export_schedule(s, config.physics, config.drive.laser_rabi);
  out.files.push_back({"schedule.txt", header(config, "schedule") + schedule_text});

  std::string csv = header(config, "operation counts");
  csv += csv_row({"n", "holonomic", "decomposed"});
  for (std::size_t n = 1; n <= config.table_max_n; ++n) {
    const auto c = operation_counts(static_cast<long long>(n));
    csv += csv_row({std::to_string(n), std::to_string(c.holonomic), std::to_string(c.decomposed)});
  }
  out.files.push_back({"operation_counts.csv", csv});

  out.summary = "compiled " + std::to_string(s.intervals.size()) + " interval(s), total duration " +
                format_number(s.total_duration()) + " s, schedule hash " + git_blob_hash(schedule_text) + "\n";
  for (const auto& iv : s.intervals)
    out.summary += "  interval " + std::to_string(iv.index) + ": ions (" + std::to_string(iv.ions.first) + "," +
                   std::to_string(iv.ions.second) + "), area " + format_number(iv.pulse_area) + " rad, " +
                   format_number(iv.duration) + " s" + (iv.lasers ? "" : ", effective-only") + "\n";
  return out;
}

PipelineResult cmd_verify(const RunConfig& config, const VerifyOptions& options) {
  PulseSchedule s = build_schedule(config);
  if (options.perturb_area) s = perturb_area(std::move(s), main_interval(config.gate), *options.perturb_area);
  const HolonomyReport h = verify_holonomy(s, config.numerics.grid_points, options.timeseries);
  const double err = gate_error(s, config.gate);
  const bool ok = h.cyclicity_residual <= config.numerics.cyclicity_tol &&
                  h.transport_residual <= config.numerics.transport_tol && err <= config.numerics.gate_error_tol;

  DocumentWriter w;
  w.section("verify");
  w.put("cyclicity_residual", h.cyclicity_residual);
  w.put("transport_residual", h.transport_residual);
  w.put("gate_error", err);
  w.put("grid_points", h.grid_points);
  w.put("perturb_area", options.perturb_area.value_or(0.0));
  w.put("schedule_hash", git_blob_hash(export_schedule(s, config.physics, config.drive.laser_rabi)));
  w.put("passed", ok);

  PipelineResult out;
  out.exit_code = ok ? kExitOk : kExitVerify;
  out.files.push_back({"verify.txt", header(config, "holonomy verification") + w.str()});
  if (options.timeseries) {
    std::string csv = header(config, "holonomy time series");
    csv += csv_row({"t_s", "transport_residual", "subspace_population"});
    for (const auto& smp : h.samples)
      csv += csv_row({format_number(smp.t), format_number(smp.residual), format_number(smp.subspace_population)});
    out.files.push_back({"holonomy.csv", csv});
  }
  out.summary = std::string(ok ? "PASS" : "FAIL") + ": cyclicity " + format_number(h.cyclicity_residual) +
                ", transport " + format_number(h.transport_residual) + ", gate error " + format_number(err) + "\n";
  return out;
}

PipelineResult cmd_fidelity(const RunConfig& config, bool timeseries) {
  require_full_model(config);
  const PulseSchedule s = build_schedule(config);
  const std::size_t q = config.gate.num_qubits();

  FidelityRequest rq = request_for(config);
  const bool series = timeseries || config.io.emit_timeseries;
  if (series) {
    rq.evolve.sample_every = config.io.sample_every;
    rq.evolve.tracked = computational_indices(q);
  }
  const FidelityRun run = run_config_fidelity(config, s, rq);

  std::optional<FidelityRun> diag;
  if (config.fidelity.effective_diagnostic && config.fidelity.model == Model::full) {
    FidelityRequest drq = request_for(config);
    drq.model = Model::effective;
    diag = run_config_fidelity(config, s, drq);
  }

  const std::string schedule_text = export_schedule(s, config.physics, config.drive.laser_rabi);
  DocumentWriter w;
  w.section("result");
  w.put("fidelity", run.result.fidelity);
  w.put("leakage", run.result.leakage);
  w.put("trace_error", run.result.trace_error);
  if (config.fidelity.method == Method::density_matrix) w.put("min_eigenvalue", run.min_eigenvalue);
  w.section("manifest");
  w.put("model", to_string(config.fidelity.model));
  w.put("method", to_string(config.fidelity.method));
  w.put("initial_state", config.resolved_initial_state());
  w.put("initial_fock", config.physics.initial_fock);
  w.put("fock_cutoff", config.physics.fock_cutoff);
  w.put("dt_s", config.resolved_dt());
  w.put("steps", run.steps);
  w.put("total_duration_s", s.total_duration());
  w.put("lamb_dicke_measure", config.physics.lamb_dicke_measure());
  w.put("lamb_dicke_warning", config.physics.lamb_dicke_warning());
  w.put("schedule_hash", git_blob_hash(schedule_text));
  if (diag) {
    w.section("diagnostic.effective_model");
    w.put("fidelity", diag->result.fidelity);
    w.put("leakage", diag->result.leakage);
  }

  PipelineResult out;
  out.files.push_back({"fidelity.txt", header(config, "gate fidelity") + w.str()});
  if (series) {
    std::vector<std::string> cols{"t_s"};
    for (std::size_t k = 0; k < (std::size_t{1} << q); ++k) cols.push_back("pop_" + bits_of(k, q));
    cols.push_back("trace");
    cols.push_back("fidelity");
    std::string csv = header(config, "fidelity time series") + csv_row(cols);
    for (const auto& smp : run.samples) {
      std::vector<std::string> cells{format_number(smp.t)};
      for (double p : smp.populations) cells.push_back(format_number(p));
      cells.push_back(format_number(smp.trace));
      cells.push_back(format_number(smp.fidelity));
      csv += csv_row(cells);
    }
    out.files.push_back({"timeseries.csv", csv});
  }

  out.summary = "F = " + fixed4(run.result.fidelity) + "  (" + std::string(to_string(config.fidelity.model)) +
                " model, " + std::string(to_string(config.fidelity.method)) + ", leakage " +
                fixed4(run.result.leakage) + ", " + format_number(run.result.wall_time) + " s, kernels " +
                std::string(kernels::isa_name(kernels::active_isa())) + ")\n";
  if (diag)
    out.summary += "info: effective model with decay gives F = " + fixed4(diag->result.fidelity) + "\n";
  if (config.physics.lamb_dicke_warning())
    out.summary += "warning: eta^2 (n_max + 1) = " + format_number(config.physics.lamb_dicke_measure()) + " >= 0.1\n";
  return out;
}

RunConfig with_sweep_value(RunConfig c, const std::string& parameter, double value) {
  auto as_count = [&](double v) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 64) throw ConfigError(parameter + " values must be small non-negative integers");
    return static_cast<std::size_t>(v);
  };
  if (parameter == "dt") {
    if (!(value > 0.0) || value > kTwoPi / c.physics.delta / 40.0 * (1 + 1e-12))
      throw ConfigError("dt value " + format_number(value) + " must be positive and at most (2 pi / delta) / 40");
    c.numerics.dt = value;
  } else if (parameter == "fock_cutoff") {
    c.physics.fock_cutoff = as_count(value);
    if (c.physics.initial_fock > c.physics.fock_cutoff) throw ConfigError("fock_cutoff below initial_fock");
  } else if (parameter == "initial_fock") {
    c.physics.initial_fock = as_count(value);
    if (c.physics.initial_fock > c.physics.fock_cutoff) throw ConfigError("initial_fock beyond fock_cutoff");
  } else if (parameter == "delta") {
    if (!(value > 0.0)) throw ConfigError("delta values must be positive (Hz)");
    c.physics.delta = kTwoPi * value;
    if (c.numerics.dt && *c.numerics.dt > kTwoPi / c.physics.delta / 40.0)
      throw ConfigError("numerics.dt_s too large for delta " + format_number(value) + " Hz");
  } else if (parameter == "rabi") {
    if (!(value > 0.0)) throw ConfigError("rabi values must be positive (Hz)");
    c.drive.laser_rabi = kTwoPi * value;
  } else {
    throw ConfigError("unknown sweep parameter '" + parameter + "' (expected dt, fock_cutoff, delta, rabi or initial_fock)");
  }
  return c;
}

PipelineResult cmd_sweep(const RunConfig& config, const std::string& parameter, const std::vector<double>& values) {
  RunConfig base = config;
  base.sweep.parameter = parameter;
  base.sweep.values = values;
  if (parameter != "dt" && parameter != "fock_cutoff" && parameter != "delta" && parameter != "rabi" &&
      parameter != "initial_fock")
    throw ConfigError("unknown sweep parameter '" + parameter + "' (expected dt, fock_cutoff, delta, rabi or initial_fock)");
  require_full_model(base);

  std::string csv = header(base, "sweep over " + parameter);
  csv += csv_row({parameter, "fidelity", "leakage"});
  PipelineResult out;
  for (double v : values) {
    const RunConfig c = with_sweep_value(base, parameter, v);
    const FidelityRun run = run_config_fidelity(c, build_schedule(c), request_for(c));
    csv += csv_row({format_number(v), format_number(run.result.fidelity), format_number(run.result.leakage)});
    out.summary += parameter + " = " + format_number(v) + ": F = " + fixed4(run.result.fidelity) + "\n";
  }
  out.files.push_back({"sweep_" + parameter + ".csv", csv});
  if (values.empty()) out.summary = "empty range: header-only CSV\n";
  return out;
}

}  // namespace holo
