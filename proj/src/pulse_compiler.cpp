#include "holo/pulse_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace holo {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_ee_kind(CouplingKind k) { return k == CouplingKind::ee_from_10 || k == CouplingKind::ee_from_11; }

double real_amplitude(const EffectiveCoupling& c) {
  const double mag = std::abs(c.amplitude);
  if (std::abs(c.amplitude.imag()) > 1e-12 * std::max(mag, 1e-300))
    throw std::invalid_argument(std::string("coupling ") + std::string(to_string(c.kind)) +
                                " has a complex phase; lasers carry only a sign");
  return c.amplitude.real();
}

LaserPulse make_laser(std::size_t ion, Transition t, Sideband s, DetuningBranch b, double signed_rabi) {
  return LaserPulse{ion, t, s, b, std::abs(signed_rabi), signed_rabi < 0 ? -1 : 1};
}

}  // namespace

double closing_sign(std::size_t num_controls) { return num_controls == 2 ? 1.0 : -1.0; }

int LaserPulse::frame_sign() const {
  const bool minus = (sideband == Sideband::blue) == (branch == DetuningBranch::nu_plus_delta);
  return minus ? -1 : 1;
}

std::string LaserPulse::detuning_label() const {
  const std::string inner = branch == DetuningBranch::nu_plus_delta ? "nu+delta" : "nu-delta";
  return sideband == Sideband::blue ? "-(" + inner + ")" : "(" + inner + ")";
}

double Interval::rabi_magnitude() const {
  double s = 0.0;
  for (const auto& c : couplings) s += std::norm(c.amplitude);
  return std::sqrt(s);
}

double PulseSchedule::total_duration() const {
  return std::accumulate(intervals.begin(), intervals.end(), 0.0,
                         [](double acc, const Interval& iv) { return acc + iv.duration; });
}

std::vector<double> PulseSchedule::boundaries() const {
  std::vector<double> b{0.0};
  for (const auto& iv : intervals) b.push_back(b.back() + iv.duration);
  return b;
}

PulseSchedule compile(const GateSpec& spec, double drive, const CompileOptions& options) {
  spec.validate();
  if (!(drive > 0.0)) throw std::invalid_argument("compile: drive must be positive");
  const double outer = options.outer_coupling.value_or(drive);
  const double middle = options.middle_coupling.value_or(drive);
  if (!(outer > 0.0) || !(middle > 0.0)) throw std::invalid_argument("compile: couplings must be positive");

  const std::size_t n = spec.num_controls;
  const double half_theta = spec.axis.theta / 2;
  PulseSchedule sched{spec, drive, {}};

  auto push = [&](IonPair ions, std::vector<EffectiveCoupling> couplings, double area) {
    Interval iv;
    iv.index = sched.intervals.size() + 1;
    iv.ions = ions;
    iv.couplings = std::move(couplings);
    iv.pulse_area = area;
    iv.duration = area / iv.rabi_magnitude();
    sched.intervals.push_back(std::move(iv));
  };

  if (n == 1) {
    push({1, 2},
         {{CouplingKind::ee_from_10, drive * std::sin(half_theta) * std::polar(1.0, spec.axis.phi)},
          {CouplingKind::ee_from_11, -drive * std::cos(half_theta)}},
         kPi);
    return sched;
  }

  push({1, 2}, {{CouplingKind::ee_from_11, outer}}, kPi / 2);
  for (std::size_t k = 2; k <= n - 1; ++k) push({k, k + 1}, {{CouplingKind::oneE_from_e1, middle}}, kPi / 2);
  push({n, n + 1},
       {{CouplingKind::oneE_from_e0, drive * std::cos(half_theta)},
        {CouplingKind::oneE_from_e1, drive * std::sin(half_theta) * std::polar(1.0, -spec.axis.phi)}},
       kPi);
  // Return leg. A state whose control string breaks at depth j only sees the
  // first j forward/return pairs plus the two outer intervals, so every return
  // pulse except the innermost must undo its forward partner (-V), and the
  // closing |ee><11| pulse carries -1 for all n >= 3. For n <= 3 this is the
  // familiar (-1)^n; for even n >= 4 the (-1)^n sign leaves |1 1 0 ...> with
  // a phase of -1.
  for (std::size_t k = n + 1; k <= 2 * n - 2; ++k) {
    const std::size_t first = 2 * n - k;
    push({first, first + 1}, {{CouplingKind::oneE_from_e1, first == n - 1 ? middle : -middle}}, kPi / 2);
  }
  push({1, 2}, {{CouplingKind::ee_from_11, closing_sign(n) * outer}}, kPi / 2);
  return sched;
}

std::vector<double> schedule_durations(const PulseSchedule& schedule) {
  std::vector<double> out;
  out.reserve(schedule.intervals.size());
  for (const auto& iv : schedule.intervals) {
    const double mag = iv.rabi_magnitude();
    if (mag == 0.0) {
      if (iv.pulse_area != 0.0)
        throw std::domain_error("interval " + std::to_string(iv.index) + " has zero amplitude but nonzero area");
      out.push_back(0.0);
      continue;
    }
    out.push_back(iv.pulse_area / mag);
  }
  return out;
}

void SystemParams::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (gamma_e0 < 0.0 || gamma_e1 < 0.0) throw std::invalid_argument("decay rates must be non-negative");
  if (initial_fock > fock_cutoff) throw std::invalid_argument("initial Fock state exceeds the cutoff");
}

LaserRealization realize_lasers(const Interval& interval, const SystemParams& params, double anchor_rabi) {
  if (!(anchor_rabi > 0.0)) throw std::invalid_argument("realize_lasers: anchor Rabi must be positive");
  if (interval.couplings.empty()) throw std::invalid_argument("realize_lasers: interval has no couplings");
  const bool ee = is_ee_kind(interval.couplings.front().kind);
  for (const auto& c : interval.couplings)
    if (is_ee_kind(c.kind) != ee) throw std::invalid_argument("realize_lasers: mixed coupling families");
  if (!ee && interval.couplings.size() == 1)
    throw EffectiveOnlyError("interval " + std::to_string(interval.index) +
                             " (single |1e><e1| coupling) has no laser construction; effective-only");

  const double scale = params.delta / (params.eta * params.eta * anchor_rabi);
  const std::size_t i = interval.ions.first, j = interval.ions.second;
  LaserRealization out;
  for (const auto& c : interval.couplings) {
    const double w = real_amplitude(c);
    if (w == 0.0) continue;
    switch (c.kind) {
      case CouplingKind::ee_from_10:  // W10 = -eta^2 W1 W~0 / delta
        out.lasers.push_back(make_laser(i, Transition::one_e, Sideband::blue, DetuningBranch::nu_plus_delta, anchor_rabi));
        out.lasers.push_back(make_laser(j, Transition::zero_e, Sideband::red, DetuningBranch::nu_plus_delta, -w * scale));
        break;
      case CouplingKind::ee_from_11:  // W11 = eta^2 W1' W~1 / delta
        out.lasers.push_back(make_laser(i, Transition::one_e, Sideband::red, DetuningBranch::nu_minus_delta, anchor_rabi));
        out.lasers.push_back(make_laser(j, Transition::one_e, Sideband::blue, DetuningBranch::nu_minus_delta, w * scale));
        break;
      case CouplingKind::oneE_from_e0:  // We0 = eta^2 W1* W~0 / delta
        out.lasers.push_back(make_laser(i, Transition::one_e, Sideband::blue, DetuningBranch::nu_plus_delta, anchor_rabi));
        out.lasers.push_back(make_laser(j, Transition::zero_e, Sideband::blue, DetuningBranch::nu_plus_delta, w * scale));
        break;
      case CouplingKind::oneE_from_e1:  // We1 = -eta^2 (W1')* W~1 / delta
        out.lasers.push_back(make_laser(i, Transition::one_e, Sideband::red, DetuningBranch::nu_minus_delta, anchor_rabi));
        out.lasers.push_back(make_laser(j, Transition::one_e, Sideband::red, DetuningBranch::nu_minus_delta, -w * scale));
        break;
    }
  }
  double max_rabi = 0.0;
  for (const auto& l : out.lasers) max_rabi = std::max(max_rabi, l.rabi);
  out.detuning_ratio = max_rabi > 0 ? params.delta / (params.eta * max_rabi) : std::numeric_limits<double>::infinity();
  out.large_detuning_warning = out.detuning_ratio < 10.0;
  return out;
}

std::vector<EffectiveCoupling> couplings_from_lasers(const Interval& interval, const SystemParams& params) {
  if (!interval.lasers) throw EffectiveOnlyError("couplings_from_lasers: interval is effective-only");
  const std::size_t i = interval.ions.first, j = interval.ions.second;
  auto find = [&](std::size_t ion, Transition t, Sideband s, DetuningBranch b) {
    double v = 0.0;
    for (const auto& l : *interval.lasers)
      if (l.ion == ion && l.transition == t && l.sideband == s && l.branch == b) v += l.signed_rabi();
    return v;
  };
  const double k = params.eta * params.eta / params.delta;
  const bool ee = !interval.couplings.empty() && is_ee_kind(interval.couplings.front().kind);
  std::vector<EffectiveCoupling> out;
  if (ee) {
    const double w1 = find(i, Transition::one_e, Sideband::blue, DetuningBranch::nu_plus_delta);
    const double w1p = find(i, Transition::one_e, Sideband::red, DetuningBranch::nu_minus_delta);
    const double wt0 = find(j, Transition::zero_e, Sideband::red, DetuningBranch::nu_plus_delta);
    const double wt1 = find(j, Transition::one_e, Sideband::blue, DetuningBranch::nu_minus_delta);
    out.push_back({CouplingKind::ee_from_10, -k * w1 * wt0});
    out.push_back({CouplingKind::ee_from_11, k * w1p * wt1});
  } else {
    const double w1 = find(i, Transition::one_e, Sideband::blue, DetuningBranch::nu_plus_delta);
    const double w1p = find(i, Transition::one_e, Sideband::red, DetuningBranch::nu_minus_delta);
    const double wt0 = find(j, Transition::zero_e, Sideband::blue, DetuningBranch::nu_plus_delta);
    const double wt1 = find(j, Transition::one_e, Sideband::red, DetuningBranch::nu_minus_delta);
    out.push_back({CouplingKind::oneE_from_e0, k * w1 * wt0});
    out.push_back({CouplingKind::oneE_from_e1, -k * w1p * wt1});
  }
  return out;
}

void attach_lasers(PulseSchedule& schedule, const SystemParams& params, double anchor_rabi) {
  for (auto& iv : schedule.intervals) {
    try {
      iv.lasers = realize_lasers(iv, params, anchor_rabi).lasers;
    } catch (const EffectiveOnlyError&) {
      iv.lasers.reset();
    } catch (const std::invalid_argument&) {
      iv.lasers.reset();  // complex coupling: no sign-only realization
    }
  }
}

std::string_view to_string(Transition t) { return t == Transition::zero_e ? "zero_e" : "one_e"; }
std::string_view to_string(Sideband s) { return s == Sideband::red ? "red" : "blue"; }
std::string_view to_string(DetuningBranch b) {
  return b == DetuningBranch::nu_plus_delta ? "nu_plus_delta" : "nu_minus_delta";
}
std::string_view to_string(CouplingKind k) {
  switch (k) {
    case CouplingKind::ee_from_10: return "ee_from_10";
    case CouplingKind::ee_from_11: return "ee_from_11";
    case CouplingKind::oneE_from_e0: return "oneE_from_e0";
    case CouplingKind::oneE_from_e1: return "oneE_from_e1";
  }
  return "unknown";
}

}  // namespace holo
