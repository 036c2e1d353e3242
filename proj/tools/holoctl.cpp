// holoctl: compile, verify and simulate holonomic controlled gates.
//
// Exit codes: 0 success, 1 usage or config error, 2 verification failure,
// 3 numeric abort (norm or trace drift).

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "holo/full_sim.hpp"
#include "holo/pipelines.hpp"
#include "holo/run_config.hpp"
#include "holo/text_format.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    std::size_t used = 0;
    const double v = std::stod(item.substr(a), &used);
    if (item.find_first_not_of(" \t", a + used) != std::string::npos)
      throw holo::ConfigError("malformed value '" + item + "' in --values");
    out.push_back(v);
  }
  return out;
}

void emit(const holo::PipelineResult& result, const std::string& out_dir) {
  if (!result.files.empty()) std::filesystem::create_directories(out_dir);
  for (const auto& f : result.files) {
    const auto path = (std::filesystem::path(out_dir) / f.name).string();
    holo::write_file(path, f.content);
    std::cout << "wrote " << path << "\n";
  }
  std::cout << result.summary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-schedule compiler and simulator for holonomic multiqubit controlled gates"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values;
  double perturb = 0.0;
  bool timeseries = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides io.out_dir)");
  };
  CLI::App* compile = app.add_subcommand("compile", "write the pulse schedule and the operation-count table");
  add_common(compile);
  CLI::App* verify = app.add_subcommand("verify", "check the holonomy conditions and the gate error");
  add_common(verify);
  CLI::Option* perturb_opt =
      verify->add_option("--perturb-area", perturb, "scale the main interval's area by (1 + value)");
  verify->add_flag("--timeseries", timeseries, "also write holonomy.csv");
  CLI::App* fidelity = app.add_subcommand("fidelity", "integrate the full model and report the gate fidelity");
  add_common(fidelity);
  fidelity->add_flag("--timeseries", timeseries, "also write timeseries.csv");
  CLI::App* sweep = app.add_subcommand("sweep", "fidelity over a parameter range");
  add_common(sweep);
  sweep->add_option("--param", param, "dt, fock_cutoff, delta, rabi or initial_fock (default: sweep.parameter)");
  CLI::Option* values_opt = sweep->add_option("--values", values, "comma-separated values in config units");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? holo::kExitOk : holo::kExitConfig;
  }

  try {
    const holo::RunConfig config = holo::load_config(config_path);
    const std::string dir = out_dir.empty() ? config.io.out_dir : out_dir;
    holo::PipelineResult result;
    if (compile->parsed()) {
      result = holo::cmd_compile(config);
    } else if (verify->parsed()) {
      holo::VerifyOptions opts;
      if (perturb_opt->count()) opts.perturb_area = perturb;
      opts.timeseries = timeseries;
      result = holo::cmd_verify(config, opts);
    } else if (fidelity->parsed()) {
      result = holo::cmd_fidelity(config, timeseries);
    } else {
      const std::string p = param.empty() ? config.sweep.parameter : param;
      if (p.empty()) throw holo::ConfigError("sweep needs --param or sweep.parameter");
      const std::vector<double> v = values_opt->count() ? parse_values(values) : config.sweep.values;
      result = holo::cmd_sweep(config, p, v);
    }
    emit(result, dir);
    return result.exit_code;
  } catch (const holo::NumericAbort& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return holo::kExitNumeric;
  } catch (const holo::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return holo::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return holo::kExitConfig;
  }
}
