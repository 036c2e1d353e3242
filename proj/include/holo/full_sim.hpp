#pragma once

// Full rotating-frame ion-laser-phonon dynamics in the Lamb-Dicke regime.
//
// Each laser drives |e><m| on one ion through a red (a) or blue (a^dagger)
// sideband. In the frame rotating with the laser its term reads
//
//   i eta W e^{i s delta t} (a or a^dagger) |e><m|  + H.c.,
//
// with s = LaserPulse::frame_sign() and W the signed Rabi frequency. Time t is
// measured from the start of the gate, across segment boundaries.
//
// Evolution is fixed-step classical RK4, both for pure states and for the
// Lindblad equation with one decay operator sqrt(g0)|0><e| + sqrt(g1)|1><e|
// per ion.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "holo/gate_targets.hpp"
#include "holo/operator.hpp"
#include "holo/pulse_compiler.hpp"

namespace holo {

// Norm or trace drift beyond the abort threshold.
class NumericAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DriveSegment {
  double duration = 0.0;  // s
  std::vector<LaserPulse> lasers;
};

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

// One term O e^{i s delta t} + H.c. of a segment Hamiltonian. s = 0 is static.
struct DriveTerm {
  std::vector<SparseEntry> entries;
  int frame_sign = 0;
};

// A segment reduced to its operator terms on a concrete layout.
struct SegmentHamiltonian {
  double duration = 0.0;
  std::vector<DriveTerm> terms;
};

SegmentHamiltonian segment_hamiltonian(const DriveSegment& segment, const SystemParams& params,
                                       const HilbertLayout& layout);
// Static effective Hamiltonian of one interval, on a layout without the mode.
SegmentHamiltonian effective_segment(const Interval& interval, const HilbertLayout& layout);

Operator full_hamiltonian(double t, const DriveSegment& segment, const SystemParams& params,
                          const HilbertLayout& layout);
Operator assemble(const SegmentHamiltonian& segment, double t, double delta, std::size_t dim);

// Laser segments for each interval. Throws EffectiveOnlyError when an interval
// has no laser realization.
std::vector<DriveSegment> segments_from_schedule(const PulseSchedule& schedule);

struct TimeSample {
  double t = 0.0;
  std::vector<double> populations;  // of EvolveOptions::tracked, mode traced out
  double trace = 0.0;               // tr rho, or |psi|^2
  double fidelity = 0.0;            // against EvolveOptions::target, if set
};

struct EvolveOptions {
  double dt = 0.0;  // s; must satisfy dt <= (2 pi / delta) / 40 when delta > 0
  double abort_tolerance = 1e-4;
  // Pure-state mode only: evolve with H - (i/2) sum L^dagger L (no-jump
  // approximation). The norm then decays and is not checked.
  bool no_jump = false;
  std::size_t sample_every = 0;        // steps between samples; 0 disables
  std::vector<std::size_t> tracked;    // chain basis indices
  std::optional<StateVector> target;   // chain-space ket
};

struct UnitaryRun {
  StateVector psi;
  double max_norm_error = 0.0;  // max | |psi| - 1 | over all steps (0 in no-jump mode)
  std::size_t steps = 0;
  std::vector<TimeSample> samples;
};

struct LindbladRun {
  DensityMatrix rho{Operator()};
  double max_trace_error = 0.0;  // max |tr rho - 1| over all steps
  double min_eigenvalue = 0.0;   // smallest over segment-end checkpoints
  std::size_t steps = 0;
  std::vector<TimeSample> samples;
};

// Throws std::invalid_argument for a step-size violation and NumericAbort for
// drift beyond options.abort_tolerance.
UnitaryRun propagate_unitary(std::span<const SegmentHamiltonian> segments, const StateVector& psi0,
                             const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options);
LindbladRun lindblad_evolve(std::span<const SegmentHamiltonian> segments, const DensityMatrix& rho0,
                            const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options);

UnitaryRun propagate_unitary(std::span<const DriveSegment> segments, const StateVector& psi0,
                             const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options);
LindbladRun lindblad_evolve(std::span<const DriveSegment> segments, const DensityMatrix& rho0,
                            const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options);

struct FidelityResult {
  double fidelity = 0.0;
  double leakage = 0.0;      // 1 - tr(P rho_ions P)
  double trace_error = 0.0;  // |tr rho - 1| at tau
  double wall_time = 0.0;    // s
};

// psi0 is a qubit-space state (dimension 2^(n+1)). rho_tau lives on `layout`,
// with or without the mode; the mode is traced out first.
FidelityResult gate_fidelity(const DensityMatrix& rho_tau, const GateSpec& spec, const StateVector& psi0,
                             const HilbertLayout& layout);

// Chain-space ket of a qubit-space state, times |n> of the mode when present.
StateVector initial_state(const StateVector& qubit_state, const HilbertLayout& layout, std::size_t fock);

// Ideal output U|psi0> embedded in the chain space.
StateVector ideal_output(const GateSpec& spec, const StateVector& psi0);

enum class Model { full, effective };
enum class Method { density_matrix, no_jump };

struct FidelityRequest {
  Model model = Model::full;
  Method method = Method::density_matrix;
  EvolveOptions evolve;
};

struct FidelityRun {
  FidelityResult result;
  double min_eigenvalue = 0.0;     // density-matrix method only
  double max_norm_error = 0.0;     // no-jump method only
  std::size_t steps = 0;
  std::vector<TimeSample> samples;
};

// End-to-end: builds the segments for the requested model, evolves from
// psi0 (x) |initial_fock> and scores the result.
FidelityRun run_fidelity(const PulseSchedule& schedule, const SystemParams& params, const StateVector& psi0,
                         const FidelityRequest& request);

// Mean and minimum gate fidelity of closed-system full-model propagation over
// the computational basis inputs, mode starting in |initial_fock>.
struct ClosedSystemFidelity {
  double mean = 0.0;
  double min = 0.0;
};
ClosedSystemFidelity closed_system_fidelity(const PulseSchedule& schedule, const SystemParams& params, double dt);

}  // namespace holo
