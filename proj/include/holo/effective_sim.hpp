#pragma once

// Exact propagation of piecewise-constant effective Hamiltonians on the
// 3^(n+1) chain (no phonon mode), and numerical checks of the two holonomy
// conditions: cyclic evolution of the computational subspace and parallel
// transport <mu(t)|H(t)|nu(t)> = 0.
//
// Evolution convention: U(t, 0) = T exp(-i int H dt).

#include <cstddef>
#include <vector>

#include "holo/gate_targets.hpp"
#include "holo/operator.hpp"
#include "holo/pulse_compiler.hpp"

namespace holo {

// Orthonormal basis of a subspace and its projector.
class SubspaceProjector {
 public:
  SubspaceProjector(std::size_t dim, std::vector<StateVector> basis);
  static SubspaceProjector computational(std::size_t num_qubits);

  std::size_t dim() const { return dim_; }
  const std::vector<StateVector>& basis() const { return basis_; }
  Operator projector() const;

 private:
  std::size_t dim_;
  std::vector<StateVector> basis_;
};

// The chain operator for one coupling, without its Hermitian conjugate, e.g.
// |ee><10| on the interval's ion pair.
Operator pair_transition(CouplingKind kind, const IonPair& ions, const HilbertLayout& layout);

// Sum of amplitude * pair_transition + H.c. over the interval's couplings.
Operator effective_hamiltonian(const Interval& interval, const HilbertLayout& layout);

HilbertLayout effective_layout(const PulseSchedule& schedule);

// Ordered product of exp(-i H_k dt_k).
Operator propagate(const PulseSchedule& schedule);

// The two-qubit closed form with phase phi_t = W t.
Operator closed_form_two_qubit(double t, const GateSpec& spec, double drive);

struct HolonomyReport {
  double cyclicity_residual = 0.0;  // || P(tau) - P(0) ||
  double transport_residual = 0.0;  // max |<mu(t)|H(t)|nu(t)>| / max |coupling|
  std::size_t grid_points = 0;      // per interval

  struct Sample {
    double t;
    double residual;
    double subspace_population;  // average over computational inputs
  };
  std::vector<Sample> samples;  // filled when requested
};

HolonomyReport verify_holonomy(const PulseSchedule& schedule, std::size_t grid_points = 200,
                               bool keep_samples = false);

// || P U(tau) P - controlled_sigma(spec) || on the computational block.
double gate_error(const PulseSchedule& schedule, const GateSpec& spec);
double gate_error(const Operator& propagator, const GateSpec& spec);

// Scales the pulse area of interval `index` (1-based) by (1 + fraction) and
// recomputes its duration. Used for negative controls.
PulseSchedule perturb_area(PulseSchedule schedule, std::size_t index, double fraction);

}  // namespace holo
