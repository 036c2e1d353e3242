#include "holo/gate_targets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace holo {

std::array<double, 3> Axis::unit_vector() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void GateSpec::validate() const {
  if (num_controls < 1) throw std::invalid_argument("gate needs at least one control qubit");
  if (!(axis.theta >= 0.0 && axis.theta <= std::numbers::pi))
    throw std::invalid_argument("theta must lie in [0, pi]");
  if (!(axis.phi >= 0.0 && axis.phi < 2.0 * std::numbers::pi))
    throw std::invalid_argument("phi must lie in [0, 2 pi)");
}

Operator pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
Operator pauli_y() { return {{0.0, cplx{0, -1}}, {cplx{0, 1}, 0.0}}; }
Operator pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

Operator sigma_dot(const std::array<double, 3>& n) {
  return n[0] * pauli_x() + n[1] * pauli_y() + n[2] * pauli_z();
}

Operator controlled_unitary(std::size_t num_controls, const Operator& target) {
  if (target.dim() != 2) throw std::invalid_argument("controlled_unitary: target must be 2x2");
  const std::size_t dim = std::size_t{2} << num_controls;
  Operator u = Operator::identity(dim);
  // Only the last 2x2 block (all controls set) differs from identity.
  const std::size_t base = dim - 2;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) u(base + r, base + c) = target(r, c);
  return u;
}

Operator controlled_sigma(const GateSpec& spec) {
  spec.validate();
  return controlled_unitary(spec.num_controls, sigma_dot(spec.axis.unit_vector()));
}

BrightDark bright_dark(const GateSpec& spec) {
  spec.validate();
  const HilbertLayout layout(spec.num_qubits());
  std::vector<int> levels(spec.num_qubits(), kLevel1);
  levels.back() = kLevel0;
  const std::size_t i10 = layout.index(levels);
  levels.back() = kLevel1;
  const std::size_t i11 = layout.index(levels);

  const double c = std::cos(spec.axis.theta / 2), s = std::sin(spec.axis.theta / 2);
  const cplx e = std::polar(1.0, spec.axis.phi);
  BrightDark bd{StateVector(layout.dim()), StateVector(layout.dim())};
  bd.dark[i10] = c;
  bd.dark[i11] = s * e;
  bd.bright[i10] = s * std::conj(e);
  bd.bright[i11] = -c;
  return bd;
}

Operator compose_rotation(const GateSpec& a, const GateSpec& b) {
  if (a.num_controls != b.num_controls) throw std::invalid_argument("compose_rotation: control counts differ");
  return controlled_sigma(a) * controlled_sigma(b);
}

Operator controlled_product_rotation(const GateSpec& a, const GateSpec& b) {
  if (a.num_controls != b.num_controls)
    throw std::invalid_argument("controlled_product_rotation: control counts differ");
  const auto n = a.axis.unit_vector();
  const auto m = b.axis.unit_vector();
  const double dot = n[0] * m[0] + n[1] * m[1] + n[2] * m[2];
  const std::array<double, 3> cross{n[1] * m[2] - n[2] * m[1], n[2] * m[0] - n[0] * m[2],
                                    n[0] * m[1] - n[1] * m[0]};
  const Operator target = dot * Operator::identity(2) + cplx{0, 1} * sigma_dot(cross);
  return controlled_unitary(a.num_controls, target);
}

OperationCounts operation_counts(long long n) {
  if (n < 1) throw std::invalid_argument("operation_counts: n must be >= 1");
  if (n > 61) throw std::overflow_error("operation_counts: 2^(n+1) overflows");
  return {2 * n - 1, (1LL << (n + 1)) - 3};
}

std::vector<std::size_t> computational_indices(std::size_t num_qubits) {
  const HilbertLayout layout(num_qubits);
  std::vector<std::size_t> out;
  out.reserve(std::size_t{1} << num_qubits);
  std::vector<int> levels(num_qubits);
  for (std::size_t bits = 0; bits < (std::size_t{1} << num_qubits); ++bits) {
    for (std::size_t q = 0; q < num_qubits; ++q) levels[q] = static_cast<int>((bits >> (num_qubits - 1 - q)) & 1U);
    out.push_back(layout.index(levels));
  }
  return out;
}

Operator embed_in_chain(const Operator& qubit_op, std::size_t num_qubits) {
  if (qubit_op.dim() != (std::size_t{1} << num_qubits))
    throw std::invalid_argument("embed_in_chain: operator is not 2^q dimensional");
  const auto idx = computational_indices(num_qubits);
  const HilbertLayout layout(num_qubits);
  Operator out = Operator::identity(layout.dim());
  for (std::size_t i : idx) out(i, i) = 0.0;
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(idx[r], idx[c]) = qubit_op(r, c);
  return out;
}

StateVector embed_in_chain(const StateVector& qubit_state, std::size_t num_qubits) {
  if (qubit_state.dim() != (std::size_t{1} << num_qubits))
    throw std::invalid_argument("embed_in_chain: state is not 2^q dimensional");
  const auto idx = computational_indices(num_qubits);
  StateVector out(HilbertLayout(num_qubits).dim());
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = qubit_state[k];
  return out;
}

Operator restrict_to_computational(const Operator& chain_op, std::size_t num_qubits) {
  const auto idx = computational_indices(num_qubits);
  if (chain_op.dim() != HilbertLayout(num_qubits).dim())
    throw std::invalid_argument("restrict_to_computational: operator is not 3^q dimensional");
  Operator out(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = chain_op(idx[r], idx[c]);
  return out;
}

double gate_distance(const Operator& a, const Operator& b, PhaseMode mode) {
  if (a.dim() != b.dim()) throw std::invalid_argument("gate_distance: dimension mismatch");
  if (mode == PhaseMode::sensitive) return (a - b).op_norm();
  // Align the global phase with tr(b^dagger a).
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
  return (a - phase * b).op_norm();
}

}  // namespace holo
