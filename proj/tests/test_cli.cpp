#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kHoloctl = HOLOCTL_PATH;
const std::string kConfigs = HOLO_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("holoctl_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = kHoloctl + " " + args + " > " + (log / "stdout.txt").string() + " 2> " +
                          (log / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config(const std::string& name) { return kConfigs + "/" + name; }

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("compile writes a schedule and the operation-count table") {
  const fs::path d = scratch("compile");
  REQUIRE(run("compile --config " + config("toffoli.cfg") + " --out " + d.string(), d) == 0);
  const std::string sched = slurp(d / "schedule.txt");
  CHECK(sched.find("num_intervals = 3\n") != std::string::npos);
  CHECK(sched.find("[interval.3]") != std::string::npos);
  const std::string table = slurp(d / "operation_counts.csv");
  CHECK(table.find("n,holonomic,decomposed\n") != std::string::npos);
  CHECK(table.find("\n5,9,61\n") != std::string::npos);
  CHECK(table.find("\n10,19,2045\n") != std::string::npos);

  const fs::path d1 = scratch("compile_cnot");
  REQUIRE(run("compile --config " + config("cnot.cfg") + " --out " + d1.string(), d1) == 0);
  CHECK(slurp(d1 / "schedule.txt").find("num_intervals = 1\n") != std::string::npos);
}

TEST_CASE("every output file starts with the resolved config") {
  const fs::path d = scratch("headers");
  REQUIRE(run("compile --config " + config("cnot.cfg") + " --out " + d.string(), d) == 0);
  for (const char* f : {"schedule.txt", "operation_counts.csv"}) {
    const std::string text = slurp(d / f);
    CHECK(text.rfind("# ", 0) == 0);
    CHECK(text.find("# [gate]\n# num_controls = 1\n") != std::string::npos);
    CHECK(text.find("# delta_hz = 50000\n") != std::string::npos);
    CHECK(text.find("# fock_cutoff = 3\n") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
  }
}

TEST_CASE("verify exit codes") {
  const fs::path d = scratch("verify");
  CHECK(run("verify --config " + config("cnot.cfg") + " --out " + d.string(), d) == 0);
  CHECK(slurp(d / "verify.txt").find("passed = true") != std::string::npos);
  CHECK(run("verify --config " + config("c4_random_axis.cfg") + " --out " + d.string(), d) == 0);
  CHECK(run("verify --config " + config("cnot.cfg") + " --out " + d.string() + " --perturb-area 0.01", d) == 2);
  CHECK(slurp(d / "verify.txt").find("passed = false") != std::string::npos);
  CHECK(run("verify --config " + config("toffoli.cfg") + " --out " + d.string() + " --timeseries", d) == 0);
  CHECK(fs::exists(d / "holonomy.csv"));
}

TEST_CASE("config errors exit 1 with a line number") {
  const fs::path d = scratch("bad");
  const fs::path cfg = write_config(d, "[gate]\nnum_controls = 1\nwobble = 2\n");
  CHECK(run("compile --config " + cfg.string() + " --out " + d.string(), d) == 1);
  CHECK(slurp(d / "stderr.txt").find("run.cfg:3:") != std::string::npos);
  CHECK(run("compile --config " + (d / "missing.cfg").string(), d) == 1);
  CHECK(run("frobnicate", d) == 1);
  CHECK(run("compile", d) == 1);
  CHECK(run("--help", d) == 0);
}

TEST_CASE("fidelity refuses effective-only gates") {
  const fs::path d = scratch("c4");
  CHECK(run("fidelity --config " + config("c4_random_axis.cfg") + " --out " + d.string(), d) == 1);
  CHECK(slurp(d / "stderr.txt").find("effective-only gate") != std::string::npos);
}

TEST_CASE("fidelity outputs are byte-identical across runs") {
  const fs::path a = scratch("fid_a"), b = scratch("fid_b");
  REQUIRE(run("fidelity --config " + config("cnot.cfg") + " --out " + a.string() + " --timeseries", a) == 0);
  REQUIRE(run("fidelity --config " + config("cnot.cfg") + " --out " + b.string() + " --timeseries", b) == 0);
  for (const char* f : {"fidelity.txt", "timeseries.csv"}) CHECK(slurp(a / f) == slurp(b / f));
  const std::string report = slurp(a / "fidelity.txt");
  CHECK(report.find("[manifest]") != std::string::npos);
  CHECK(report.find("schedule_hash = ") != std::string::npos);
  CHECK(slurp(a / "stdout.txt").find("F = 0.") != std::string::npos);
  CHECK(slurp(a / "timeseries.csv").find("t_s,pop_00,pop_01,pop_10,pop_11,trace,fidelity\n") != std::string::npos);

  const fs::path c = scratch("compile_a"), e = scratch("compile_b");
  REQUIRE(run("compile --config " + config("toffoli.cfg") + " --out " + c.string(), c) == 0);
  REQUIRE(run("compile --config " + config("toffoli.cfg") + " --out " + e.string(), e) == 0);
  CHECK(slurp(c / "schedule.txt") == slurp(e / "schedule.txt"));
}

TEST_CASE("sweep") {
  const fs::path d = scratch("sweep");
  REQUIRE(run("sweep --config " + config("cnot.cfg") + " --out " + d.string() + " --param fock_cutoff --values \"\"",
              d) == 0);
  const std::string csv = slurp(d / "sweep_fock_cutoff.csv");
  const std::string head = "fock_cutoff,fidelity,leakage\n";
  REQUIRE(csv.size() >= head.size());
  CHECK(csv.substr(csv.size() - head.size()) == head);
  CHECK(run("sweep --config " + config("cnot.cfg") + " --out " + d.string() + " --param eta --values 1", d) == 1);
  CHECK(run("sweep --config " + config("cnot.cfg") + " --out " + d.string() + " --param dt --values 1e-3", d) == 1);
}

TEST_CASE("numeric abort exits 3") {
  const fs::path d = scratch("abort");
  // a drift budget below rounding level trips the trace check
  const fs::path cfg = write_config(d,
                                    "[gate]\nnum_controls = 1\ntheta = pi/2\n[physics]\nexcited_lifetime_s = 1.2\n"
                                    "[numerics]\nabort_tolerance = 1e-300\n[fidelity]\neffective_diagnostic = false\n");
  CHECK(run("fidelity --config " + cfg.string() + " --out " + d.string(), d) == 3);
  CHECK(slurp(d / "stderr.txt").find("numeric abort") != std::string::npos);
}
