#include "holo/run_config.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace holo {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

class Reader {
 public:
  explicit Reader(const KeyValueDocument& doc) : doc_(doc) {}

  const Entry* get(const std::string& key) {
    used_.insert(key);
    return doc_.find(key);
  }

  std::optional<double> number(const std::string& key) {
    const Entry* e = get(key);
    if (!e) return std::nullopt;
    const auto v = to_double(e->value);
    if (!v) doc_.fail(key, "expected a number, got '" + e->value + "'");
    return v;
  }

  std::optional<double> positive(const std::string& key) {
    const auto v = number(key);
    if (v && !(*v > 0.0)) doc_.fail(key, "must be positive");
    return v;
  }

  std::optional<double> non_negative(const std::string& key) {
    const auto v = number(key);
    if (v && *v < 0.0) doc_.fail(key, "must be non-negative");
    return v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    const Entry* e = get(key);
    if (!e) return std::nullopt;
    std::size_t v = 0;
    const auto& s = e->value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) doc_.fail(key, "expected a non-negative integer, got '" + s + "'");
    return v;
  }

  std::optional<bool> boolean(const std::string& key) {
    const Entry* e = get(key);
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    doc_.fail(key, "expected true or false, got '" + e->value + "'");
  }

  std::optional<double> angle(const std::string& key) {
    const Entry* e = get(key);
    if (!e) return std::nullopt;
    try {
      return parse_angle(e->value);
    } catch (const std::invalid_argument& ex) {
      doc_.fail(key, ex.what());
    }
  }

  std::optional<std::string> text(const std::string& key) {
    const Entry* e = get(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::vector<double> list(const std::string& key) {
    std::vector<double> out;
    const Entry* e = get(key);
    if (!e) return out;
    std::string_view rest = e->value;
    if (trim(rest) == "none") return out;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto v = to_double(item);
      if (!v) doc_.fail(key, "expected a comma-separated list of numbers");
      out.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const { doc_.fail(key, msg); }

  void reject_unknown() const {
    for (const auto& e : doc_.entries())
      if (!used_.count(e.key)) throw ParseError(doc_.source(), e.line, "unknown key '" + e.key + "'");
  }

 private:
  const KeyValueDocument& doc_;
  std::set<std::string> used_;
};

const std::set<std::string> kSweepParameters = {"dt", "fock_cutoff", "delta", "rabi", "initial_fock"};

// Angle expression: factor (('*' | '/') factor)*, factor = ['-'] (number | pi).
class AngleParser {
 public:
  explicit AngleParser(std::string_view s) : s_(s) {}

  double parse() {
    double v = factor();
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      const char op = s_[pos_++];
      const double rhs = factor();
      if (op == '*') v *= rhs;
      else if (op == '/') {
        if (rhs == 0.0) throw std::invalid_argument("division by zero in angle");
        v /= rhs;
      } else
        throw std::invalid_argument(std::string("unexpected '") + op + "' in angle");
    }
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  double factor() {
    skip();
    double sign = 1.0;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      sign = -1.0;
      ++pos_;
      skip();
    }
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return sign * std::numbers::pi;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) throw std::invalid_argument("malformed angle '" + std::string(s_) + "'");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return sign * v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

double parse_angle(std::string_view text) {
  if (trim(text).empty()) throw std::invalid_argument("empty angle");
  return AngleParser(trim(text)).parse();
}

StateVector basis_from_bits(std::string_view bits) {
  if (bits.empty() || bits.size() > 20) throw std::invalid_argument("bit string must have 1 to 20 characters");
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string may contain only 0 and 1");
    index = index * 2 + static_cast<std::size_t>(c - '0');
  }
  return StateVector::basis(std::size_t{1} << bits.size(), index);
}

std::string_view to_string(Model m) { return m == Model::full ? "full" : "effective"; }
std::string_view to_string(Method m) { return m == Method::density_matrix ? "density_matrix" : "no_jump"; }

double RunConfig::pair_coupling() const { return holo::pair_coupling(physics, drive.laser_rabi); }

double RunConfig::resolved_drive() const { return drive.drive.value_or(std::sqrt(2.0) * pair_coupling()); }

CompileOptions RunConfig::compile_options() const {
  CompileOptions o;
  o.outer_coupling = drive.outer_coupling.value_or(pair_coupling());
  o.middle_coupling = drive.middle_coupling.value_or(resolved_drive());
  return o;
}

double RunConfig::resolved_dt() const {
  return numerics.dt.value_or(kTwoPi / physics.delta / static_cast<double>(numerics.steps_per_period));
}

std::string RunConfig::resolved_initial_state() const {
  if (!fidelity.initial_state.empty()) return fidelity.initial_state;
  return std::string(gate.num_controls, '1') + "0";
}

RunConfig parse_config(const KeyValueDocument& doc) {
  Reader r(doc);
  RunConfig c;

  const auto nc = r.count("gate.num_controls");
  if (!nc) r.fail("gate.num_controls", "required");
  if (*nc < 1) r.fail("gate.num_controls", "must be at least 1");
  if (*nc > 12) r.fail("gate.num_controls", "at most 12 controls are supported");
  c.gate.num_controls = *nc;
  c.gate.axis.theta = r.angle("gate.theta").value_or(0.0);
  c.gate.axis.phi = r.angle("gate.phi").value_or(0.0);
  if (c.gate.axis.theta < 0.0 || c.gate.axis.theta > std::numbers::pi + 1e-9) r.fail("gate.theta", "must lie in [0, pi]");
  c.gate.axis.theta = std::min(c.gate.axis.theta, std::numbers::pi);
  if (c.gate.axis.phi < 0.0 || c.gate.axis.phi >= kTwoPi) r.fail("gate.phi", "must lie in [0, 2 pi)");

  c.physics.eta = r.positive("physics.eta").value_or(0.044);
  c.physics.delta = kTwoPi * r.positive("physics.delta_hz").value_or(50e3);
  const auto lifetime = r.positive("physics.excited_lifetime_s");
  const auto g0 = r.non_negative("physics.gamma_e0_per_s");
  const auto g1 = r.non_negative("physics.gamma_e1_per_s");
  if (lifetime && (g0 || g1))
    r.fail("physics.excited_lifetime_s", "give either excited_lifetime_s or gamma_e0_per_s/gamma_e1_per_s, not both");
  if (lifetime) {
    c.physics.gamma_e0 = c.physics.gamma_e1 = 1.0 / (2.0 * *lifetime);
  } else {
    c.physics.gamma_e0 = g0.value_or(0.0);
    c.physics.gamma_e1 = g1.value_or(0.0);
  }
  c.physics.initial_fock = r.count("physics.initial_fock").value_or(0);
  c.physics.fock_cutoff = r.count("numerics.fock_cutoff").value_or(3);
  if (c.physics.initial_fock > c.physics.fock_cutoff) r.fail("physics.initial_fock", "exceeds numerics.fock_cutoff");

  c.drive.laser_rabi = kTwoPi * r.positive("drive.laser_rabi_hz").value_or(30e3);
  if (const auto v = r.positive("drive.drive_hz")) c.drive.drive = kTwoPi * *v;
  if (const auto v = r.positive("drive.outer_coupling_hz")) c.drive.outer_coupling = kTwoPi * *v;
  if (const auto v = r.positive("drive.middle_coupling_hz")) c.drive.middle_coupling = kTwoPi * *v;

  if (const auto v = r.positive("numerics.dt_s")) c.numerics.dt = *v;
  c.numerics.steps_per_period = r.count("numerics.steps_per_period").value_or(50);
  if (c.numerics.steps_per_period < 1) r.fail("numerics.steps_per_period", "must be at least 1");
  c.numerics.grid_points = r.count("numerics.grid_points").value_or(200);
  if (c.numerics.grid_points < 2) r.fail("numerics.grid_points", "must be at least 2");
  c.numerics.cyclicity_tol = r.positive("numerics.cyclicity_tol").value_or(1e-9);
  c.numerics.transport_tol = r.positive("numerics.transport_tol").value_or(1e-9);
  c.numerics.gate_error_tol = r.positive("numerics.gate_error_tol").value_or(1e-8);
  c.numerics.abort_tolerance = r.positive("numerics.abort_tolerance").value_or(1e-4);

  c.io.out_dir = r.text("io.out_dir").value_or("out");
  c.io.emit_timeseries = r.boolean("io.emit_timeseries").value_or(false);
  c.io.sample_every = r.count("io.sample_every").value_or(250);
  if (c.io.sample_every < 1) r.fail("io.sample_every", "must be at least 1");

  if (const auto s = r.text("fidelity.initial_state")) {
    if (s->size() != c.gate.num_controls + 1 || s->find_first_not_of("01") != std::string::npos)
      r.fail("fidelity.initial_state", "must be a bit string of length num_controls + 1");
    c.fidelity.initial_state = *s;
  }
  if (const auto s = r.text("fidelity.model")) {
    if (*s == "full") c.fidelity.model = Model::full;
    else if (*s == "effective") c.fidelity.model = Model::effective;
    else r.fail("fidelity.model", "expected full or effective");
  }
  if (const auto s = r.text("fidelity.method")) {
    if (*s == "density_matrix") c.fidelity.method = Method::density_matrix;
    else if (*s == "no_jump") c.fidelity.method = Method::no_jump;
    else r.fail("fidelity.method", "expected density_matrix or no_jump");
  }
  c.fidelity.effective_diagnostic = r.boolean("fidelity.effective_diagnostic").value_or(true);

  if (const auto s = r.text("sweep.parameter")) {
    if (!kSweepParameters.count(*s)) r.fail("sweep.parameter", "unknown sweep parameter '" + *s + "'");
    c.sweep.parameter = *s;
  }
  c.sweep.values = r.list("sweep.values");

  c.table_max_n = r.count("compile.table_max_n").value_or(10);
  if (c.table_max_n < 1 || c.table_max_n > 61) r.fail("compile.table_max_n", "must lie in [1, 61]");

  r.reject_unknown();
  try {
    c.physics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(doc.source() + ": " + e.what());
  }
  const double dt = c.resolved_dt();
  if (dt > kTwoPi / c.physics.delta / 40.0 * (1 + 1e-12))
    r.fail(c.numerics.dt ? "numerics.dt_s" : "numerics.steps_per_period", "time step exceeds (2 pi / delta) / 40");
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(KeyValueDocument::load(path)); }

std::string resolved_config_text(const RunConfig& c) {
  DocumentWriter w;
  w.comment("frequencies in Hz (x 2 pi internally), rates in 1/s, times in s, angles in rad");
  w.section("gate");
  w.put("num_controls", c.gate.num_controls);
  w.put("theta", c.gate.axis.theta);
  w.put("phi", c.gate.axis.phi);
  w.section("physics");
  w.put("eta", c.physics.eta);
  w.put("delta_hz", c.physics.delta / kTwoPi);
  w.put("gamma_e0_per_s", c.physics.gamma_e0);
  w.put("gamma_e1_per_s", c.physics.gamma_e1);
  w.put("initial_fock", c.physics.initial_fock);
  w.section("drive");
  w.put("laser_rabi_hz", c.drive.laser_rabi / kTwoPi);
  const CompileOptions o = c.compile_options();
  w.put("drive_hz", c.resolved_drive() / kTwoPi);
  w.put("outer_coupling_hz", *o.outer_coupling / kTwoPi);
  w.put("middle_coupling_hz", *o.middle_coupling / kTwoPi);
  w.section("numerics");
  w.put("fock_cutoff", c.physics.fock_cutoff);
  w.put("dt_s", c.resolved_dt());
  w.put("steps_per_period", c.numerics.steps_per_period);
  w.put("grid_points", c.numerics.grid_points);
  w.put("cyclicity_tol", c.numerics.cyclicity_tol);
  w.put("transport_tol", c.numerics.transport_tol);
  w.put("gate_error_tol", c.numerics.gate_error_tol);
  w.put("abort_tolerance", c.numerics.abort_tolerance);
  w.section("io");
  w.put("out_dir", c.io.out_dir);
  w.put("emit_timeseries", c.io.emit_timeseries);
  w.put("sample_every", c.io.sample_every);
  w.section("fidelity");
  w.put("initial_state", c.resolved_initial_state());
  w.put("model", to_string(c.fidelity.model));
  w.put("method", to_string(c.fidelity.method));
  w.put("effective_diagnostic", c.fidelity.effective_diagnostic);
  if (!c.sweep.parameter.empty() || !c.sweep.values.empty()) {
    w.section("sweep");
    if (!c.sweep.parameter.empty()) w.put("parameter", c.sweep.parameter);
    std::string vals;
    for (std::size_t i = 0; i < c.sweep.values.size(); ++i) vals += (i ? ", " : "") + format_number(c.sweep.values[i]);
    w.put("values", c.sweep.values.empty() ? std::string("none") : vals);
  }
  w.section("compile");
  w.put("table_max_n", c.table_max_n);
  return w.str();
}

}  // namespace holo
