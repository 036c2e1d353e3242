#pragma once

// Piecewise pulse schedules for holonomic controlled-(n.sigma) gates.
//
// A gate with n controls on n+1 ions is split into max(1, 2n-1) intervals.
// Each interval drives one ion pair with a constant effective two-ion coupling
// and lasts long enough to accumulate its prescribed pulse area:
//
//   n = 1:  one interval on (1,2) with W10 |ee><10| + W11 |ee><11|, area pi,
//           W10 = W sin(t/2) e^{i phi}, W11 = -W cos(t/2).
//   n >= 2: interval 1      W11 |ee><11| on (1,2), area pi/2
//           k = 2..n-1      V |1e><e1| on (k, k+1), area pi/2
//           interval n      We0 |1e><e0| + We1 |1e><e1| on (n, n+1), area pi,
//                           We0 = W cos(t/2), We1 = W sin(t/2) e^{-i phi}
//           k = n+1..2n-2   -V |1e><e1| on (2n-k, 2n-k+1), area pi/2,
//                           except +V on the innermost pair (n-1, n)
//           interval 2n-1   s W11 |ee><11| on (1,2), area pi/2,
//                           s = +1 for n = 2 and -1 for n >= 3
//
// Laser realizations follow the rotating-frame sideband model: every laser
// drives |e><m| on one ion with a red (a) or blue (a^dagger) sideband, detuned
// so that its term carries e^{-i delta t} or e^{+i delta t}.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "holo/gate_targets.hpp"
#include "holo/operator.hpp"

namespace holo {

enum class Transition { zero_e, one_e };
enum class Sideband { red, blue };
// Magnitude of the laser detuning from the carrier: nu + delta or nu - delta.
enum class DetuningBranch { nu_plus_delta, nu_minus_delta };

struct LaserPulse {
  std::size_t ion = 1;
  Transition transition = Transition::one_e;
  Sideband sideband = Sideband::blue;
  DetuningBranch branch = DetuningBranch::nu_plus_delta;
  double rabi = 0.0;   // magnitude, rad/s
  int phase_sign = 1;  // +1 or -1

  double signed_rabi() const { return phase_sign * rabi; }
  // The term i eta W (a or a^dagger) |e><m| carries exp(i frame_sign() delta t).
  // Blue at -(nu+delta) and red at (nu-delta) rotate as e^{-i delta t}; the
  // other two as e^{+i delta t}.
  int frame_sign() const;
  bool creates_phonon() const { return sideband == Sideband::blue; }
  // Signed detuning as written for the laser, e.g. "-(nu+delta)".
  std::string detuning_label() const;
};

enum class CouplingKind { ee_from_10, ee_from_11, oneE_from_e0, oneE_from_e1 };

struct EffectiveCoupling {
  CouplingKind kind;
  cplx amplitude;  // rad/s
};

struct IonPair {
  std::size_t first = 1;
  std::size_t second = 2;
  friend bool operator==(const IonPair&, const IonPair&) = default;
};

struct Interval {
  std::size_t index = 1;  // 1-based
  IonPair ions;
  std::vector<EffectiveCoupling> couplings;
  double pulse_area = 0.0;  // rad
  double duration = 0.0;    // s
  // nullopt marks an effective-only interval (no full-model realization).
  std::optional<std::vector<LaserPulse>> lasers;

  // sqrt(sum |amplitude|^2): the Rabi rate that the pulse area refers to.
  double rabi_magnitude() const;
  bool effective_only() const { return !lasers.has_value(); }
};

struct PulseSchedule {
  GateSpec spec;
  double drive = 0.0;  // W, rad/s
  std::vector<Interval> intervals;

  double total_duration() const;
  // Start time of each interval (tau_0 = 0, tau_1, ...).
  std::vector<double> boundaries() const;
};

struct CompileOptions {
  // |W11| for the first and last intervals; defaults to the drive W.
  std::optional<double> outer_coupling;
  // Real V for single-coupling middle intervals; defaults to the drive W.
  std::optional<double> middle_coupling;
};

PulseSchedule compile(const GateSpec& spec, double drive, const CompileOptions& options = {});

// Sign s of the closing interval for n >= 2 controls.
double closing_sign(std::size_t num_controls);

// duration_k = area_k / rabi_magnitude_k. Throws std::domain_error for a zero
// amplitude with nonzero area.
std::vector<double> schedule_durations(const PulseSchedule& schedule);

struct SystemParams {
  double eta = 0.044;
  double delta = 0.0;  // rad/s
  std::size_t fock_cutoff = 3;
  double gamma_e0 = 0.0;  // 1/s
  double gamma_e1 = 0.0;  // 1/s
  std::size_t initial_fock = 0;

  // eta^2 (n_max + 1); must stay well below 1.
  double lamb_dicke_measure() const { return eta * eta * static_cast<double>(fock_cutoff + 1); }
  bool lamb_dicke_warning() const { return lamb_dicke_measure() >= 0.1; }
  // Throws std::invalid_argument for negative rates, non-positive delta or eta,
  // or an initial Fock state beyond the cutoff.
  void validate() const;
};

// Raised when an interval has no laser construction (single-coupling middle
// intervals of n >= 3 gates).
class EffectiveOnlyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LaserRealization {
  std::vector<LaserPulse> lasers;
  double detuning_ratio = 0.0;  // delta / (eta * max laser Rabi)
  bool large_detuning_warning = false;  // ratio < 10
};

// Lasers whose second-order couplings
//   W10 = -eta^2 W1 W~0 / delta,   W11 = eta^2 W1' W~1 / delta,
//   We0 = eta^2 W1* W~0 / delta,   We1 = -eta^2 (W1')* W~1 / delta
// reproduce the interval's couplings. The first ion's lasers run at
// `anchor_rabi`; the partner ion's amplitudes are solved for. Couplings must be
// real (phase_sign carries only a sign).
LaserRealization realize_lasers(const Interval& interval, const SystemParams& params, double anchor_rabi);

// Inverse map used for round-trip checks: effective couplings implied by lasers.
std::vector<EffectiveCoupling> couplings_from_lasers(const Interval& interval, const SystemParams& params);

// Fills in `lasers` for every interval that has a realization; the others
// (single-coupling middle intervals, complex couplings) stay effective-only.
void attach_lasers(PulseSchedule& schedule, const SystemParams& params, double anchor_rabi);

// Effective pair coupling produced by two lasers of equal Rabi magnitude.
inline double pair_coupling(const SystemParams& params, double laser_rabi) {
  return params.eta * params.eta * laser_rabi * laser_rabi / params.delta;
}

std::string_view to_string(Transition t);
std::string_view to_string(Sideband s);
std::string_view to_string(DetuningBranch b);
std::string_view to_string(CouplingKind k);

}  // namespace holo
