#include "holo/effective_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace holo {
namespace {

constexpr std::size_t kPairDim = kLevelsPerIon * kLevelsPerIon;

std::size_t pair_index(int a, int b) { return static_cast<std::size_t>(a) * kLevelsPerIon + static_cast<std::size_t>(b); }

// ket/bra of the 9x9 pair operator for a coupling kind.
std::pair<std::size_t, std::size_t> pair_entry(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::ee_from_10: return {pair_index(kLevelE, kLevelE), pair_index(kLevel1, kLevel0)};
    case CouplingKind::ee_from_11: return {pair_index(kLevelE, kLevelE), pair_index(kLevel1, kLevel1)};
    case CouplingKind::oneE_from_e0: return {pair_index(kLevel1, kLevelE), pair_index(kLevelE, kLevel0)};
    case CouplingKind::oneE_from_e1: return {pair_index(kLevel1, kLevelE), pair_index(kLevelE, kLevel1)};
  }
  throw std::invalid_argument("unknown coupling kind");
}

void check_pair(const IonPair& ions, std::size_t num_ions) {
  if (ions.first == ions.second) throw std::invalid_argument("interval ion pair repeats an ion");
  if (ions.first < 1 || ions.second < 1 || ions.first > num_ions || ions.second > num_ions)
    throw std::out_of_range("interval ion pair outside the layout");
}

// H_k restricted to its ion pair (9x9).
Operator local_hamiltonian(const Interval& interval) {
  Operator h(kPairDim);
  for (const auto& c : interval.couplings) {
    if (!std::isfinite(c.amplitude.real()) || !std::isfinite(c.amplitude.imag()))
      throw std::invalid_argument("interval " + std::to_string(interval.index) + " has a non-finite coupling");
    const auto [ket, bra] = pair_entry(c.kind);
    h(ket, bra) += c.amplitude;
    h(bra, ket) += std::conj(c.amplitude);
  }
  return h;
}

std::array<std::size_t, 2> pair_array(const IonPair& p) { return {p.first, p.second}; }

double max_coupling(const PulseSchedule& schedule) {
  double m = 0.0;
  for (const auto& iv : schedule.intervals)
    for (const auto& c : iv.couplings) m = std::max(m, std::abs(c.amplitude));
  return m;
}

// block^dagger * other for dim x cols row-major blocks.
std::vector<cplx> block_inner(std::span<const cplx> block, std::span<const cplx> other, std::size_t dim,
                              std::size_t cols) {
  std::vector<cplx> out(cols * cols);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t a = 0; a < cols; ++a) {
      const cplx ca = std::conj(block[r * cols + a]);
      if (ca == cplx{}) continue;
      for (std::size_t b = 0; b < cols; ++b) out[a * cols + b] += ca * other[r * cols + b];
    }
  return out;
}

}  // namespace

SubspaceProjector::SubspaceProjector(std::size_t dim, std::vector<StateVector> basis)
    : dim_(dim), basis_(std::move(basis)) {
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (basis_[k].dim() != dim_) throw std::invalid_argument("SubspaceProjector: basis vector has wrong dimension");
    for (std::size_t l = 0; l <= k; ++l) {
      const cplx g = basis_[l].inner(basis_[k]);
      if (std::abs(g - (k == l ? 1.0 : 0.0)) > 1e-12)
        throw std::invalid_argument("SubspaceProjector: basis is not orthonormal");
    }
  }
}

SubspaceProjector SubspaceProjector::computational(std::size_t num_qubits) {
  const HilbertLayout layout(num_qubits);
  std::vector<StateVector> basis;
  for (std::size_t i : computational_indices(num_qubits)) basis.push_back(StateVector::basis(layout.dim(), i));
  return SubspaceProjector(layout.dim(), std::move(basis));
}

Operator SubspaceProjector::projector() const {
  Operator p(dim_);
  for (const auto& v : basis_) p += v.projector();
  return p;
}

Operator pair_transition(CouplingKind kind, const IonPair& ions, const HilbertLayout& layout) {
  check_pair(ions, layout.num_ions());
  const auto [ket, bra] = pair_entry(kind);
  return embed(Operator::outer(kPairDim, ket, bra), {ions.first, ions.second}, layout);
}

Operator effective_hamiltonian(const Interval& interval, const HilbertLayout& layout) {
  if (layout.has_mode()) throw std::invalid_argument("effective_hamiltonian: layout must not include the mode");
  check_pair(interval.ions, layout.num_ions());
  return embed(local_hamiltonian(interval), {interval.ions.first, interval.ions.second}, layout);
}

HilbertLayout effective_layout(const PulseSchedule& schedule) { return HilbertLayout(schedule.spec.num_qubits()); }

Operator propagate(const PulseSchedule& schedule) {
  const HilbertLayout layout = effective_layout(schedule);
  const std::size_t dim = layout.dim();
  Operator u = Operator::identity(dim);
  for (const auto& iv : schedule.intervals) {
    check_pair(iv.ions, layout.num_ions());
    const Operator step = expm(local_hamiltonian(iv), iv.duration);
    const auto ions = pair_array(iv.ions);
    u = Operator(dim, apply_embedded(step, ions, layout, u.data(), dim));
  }
  return u;
}

Operator closed_form_two_qubit(double t, const GateSpec& spec, double drive) {
  spec.validate();
  if (spec.num_controls != 1) throw std::invalid_argument("closed_form_two_qubit: requires exactly one control");
  const HilbertLayout layout(2);
  const auto [dark, bright] = bright_dark(spec);
  const StateVector ee = StateVector::basis(layout.dim(), pair_index(kLevelE, kLevelE));
  const double phase = drive * t;

  Operator u(layout.dim());
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == kLevel1 && b != kLevelE) continue;  // |10>, |11> handled through D/B
      if (a == kLevelE && b == kLevelE) continue;
      u(pair_index(a, b), pair_index(a, b)) = 1.0;
    }
  u += dark.projector();
  u += std::cos(phase) * (bright.projector() + ee.projector());
  Operator cross(layout.dim());
  for (std::size_t r = 0; r < layout.dim(); ++r)
    for (std::size_t c = 0; c < layout.dim(); ++c)
      cross(r, c) = bright[r] * std::conj(ee[c]) + ee[r] * std::conj(bright[c]);
  u += cplx(0.0, -std::sin(phase)) * cross;
  return u;
}

HolonomyReport verify_holonomy(const PulseSchedule& schedule, std::size_t grid_points, bool keep_samples) {
  if (grid_points < 2) throw std::invalid_argument("verify_holonomy: need at least 2 grid points per interval");
  const HilbertLayout layout = effective_layout(schedule);
  const std::size_t dim = layout.dim();
  const std::vector<std::size_t> comp = computational_indices(layout.num_ions());
  const std::size_t m = comp.size();
  const double scale = max_coupling(schedule);

  std::vector<cplx> block(dim * m);
  for (std::size_t k = 0; k < m; ++k) block[comp[k] * m + k] = 1.0;
  std::vector<char> in_subspace(dim, 0);
  for (std::size_t i : comp) in_subspace[i] = 1;

  HolonomyReport report;
  report.grid_points = grid_points;
  const std::vector<double> starts = schedule.boundaries();

  for (std::size_t k = 0; k < schedule.intervals.size(); ++k) {
    const Interval& iv = schedule.intervals[k];
    check_pair(iv.ions, layout.num_ions());
    const Operator h = local_hamiltonian(iv);
    const HermitianPropagator prop(h);
    const auto ions = pair_array(iv.ions);
    for (std::size_t g = 0; g < grid_points; ++g) {
      const double s = iv.duration * static_cast<double>(g) / static_cast<double>(grid_points - 1);
      const Operator step = prop.at(s);
      const std::vector<cplx> evolved = apply_embedded(step, ions, layout, block, m);
      const std::vector<cplx> h_evolved = apply_embedded(h, ions, layout, evolved, m);
      const std::vector<cplx> gram = block_inner(evolved, h_evolved, dim, m);
      double worst = 0.0;
      for (const cplx& v : gram) worst = std::max(worst, std::abs(v));
      const double residual = scale > 0.0 ? worst / scale : worst;
      report.transport_residual = std::max(report.transport_residual, residual);
      if (keep_samples) {
        double pop = 0.0;
        for (std::size_t r = 0; r < dim; ++r)
          if (in_subspace[r])
            for (std::size_t c = 0; c < m; ++c) pop += std::norm(evolved[r * m + c]);
        report.samples.push_back({starts[k] + s, residual, pop / static_cast<double>(m)});
      }
    }
    block = apply_embedded(prop.at(iv.duration), ions, layout, block, m);
  }

  // P(tau) = U_S U_S^dagger versus P(0).
  Operator diff(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      cplx v{};
      for (std::size_t j = 0; j < m; ++j) v += block[r * m + j] * std::conj(block[c * m + j]);
      diff(r, c) = v;
    }
  for (std::size_t i : comp) diff(i, i) -= 1.0;
  report.cyclicity_residual = diff.op_norm();
  return report;
}

double gate_error(const Operator& propagator, const GateSpec& spec) {
  spec.validate();
  const std::size_t q = spec.num_qubits();
  if (propagator.dim() != HilbertLayout(q).dim())
    throw std::invalid_argument("gate_error: propagator dimension does not match the gate");
  return gate_distance(restrict_to_computational(propagator, q), controlled_sigma(spec));
}

double gate_error(const PulseSchedule& schedule, const GateSpec& spec) { return gate_error(propagate(schedule), spec); }

PulseSchedule perturb_area(PulseSchedule schedule, std::size_t index, double fraction) {
  if (index < 1 || index > schedule.intervals.size()) throw std::out_of_range("perturb_area: interval index out of range");
  Interval& iv = schedule.intervals[index - 1];
  iv.pulse_area *= 1.0 + fraction;
  iv.duration = iv.pulse_area / iv.rabi_magnitude();
  return schedule;
}

}  // namespace holo
