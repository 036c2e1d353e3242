#pragma once

// Ideal controlled-(n.sigma) gates and the algebra around them.
//
// Gates live in the 2^(n+1) qubit space with qubit 1 as the most significant
// bit. embed_in_chain() lifts them into the 3^(n+1) three-level chain space
// (identity on every state with some ion in |e>) for comparison against
// simulated propagators.

#include <array>
#include <cstddef>
#include <vector>

#include "holo/operator.hpp"

namespace holo {

struct Axis {
  double theta = 0.0;  // polar angle in [0, pi]
  double phi = 0.0;    // azimuth in [0, 2 pi)

  std::array<double, 3> unit_vector() const;
};

struct GateSpec {
  std::size_t num_controls = 1;
  Axis axis;

  std::size_t num_qubits() const { return num_controls + 1; }
  std::size_t qubit_dim() const { return std::size_t{1} << num_qubits(); }
  // Throws std::invalid_argument when num_controls < 1 or the angles are out of range.
  void validate() const;
};

// 2x2 matrices.
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
// n . sigma for a real 3-vector (not necessarily unit).
Operator sigma_dot(const std::array<double, 3>& n);

// [I^n - (|1><1|)^n] (x) I + (|1><1|)^n (x) target, for a 2x2 `target`.
Operator controlled_unitary(std::size_t num_controls, const Operator& target);
Operator controlled_sigma(const GateSpec& spec);

struct BrightDark {
  StateVector dark;
  StateVector bright;
};
// |D> = cos(t/2)|1..10> + sin(t/2) e^{i phi}|1..11>,
// |B> = sin(t/2) e^{-i phi}|1..10> - cos(t/2)|1..11>, in the 3^(n+1) chain space.
BrightDark bright_dark(const GateSpec& spec);

// controlled_sigma(a) * controlled_sigma(b). Throws on mismatched control counts.
Operator compose_rotation(const GateSpec& a, const GateSpec& b);
// Controlled-[(n.m) I + i sigma.(n x m)], built directly from the axes.
Operator controlled_product_rotation(const GateSpec& a, const GateSpec& b);

struct OperationCounts {
  long long holonomic;   // 2n - 1
  long long decomposed;  // 2^(n+1) - 3
};
OperationCounts operation_counts(long long n);

// Chain indices (3^q space) of the computational basis states, in qubit order.
std::vector<std::size_t> computational_indices(std::size_t num_qubits);
// Lifts a 2^q qubit operator into the 3^q chain space; identity off the
// computational subspace.
Operator embed_in_chain(const Operator& qubit_op, std::size_t num_qubits);
// Lifts a 2^q qubit state into the chain space (zero amplitude off-subspace).
StateVector embed_in_chain(const StateVector& qubit_state, std::size_t num_qubits);
// Restriction of a chain operator to the computational block.
Operator restrict_to_computational(const Operator& chain_op, std::size_t num_qubits);

enum class PhaseMode { sensitive, insensitive };
// Operator-norm distance. In insensitive mode the global phase of `b` is
// aligned to `a` first (diagnostics only).
double gate_distance(const Operator& a, const Operator& b, PhaseMode mode = PhaseMode::sensitive);

}  // namespace holo
