#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holo/effective_sim.hpp"
#include "support.hpp"

using namespace holo;
using std::numbers::pi;

namespace {

GateSpec spec(std::size_t n, double theta, double phi) { return GateSpec{n, Axis{theta, phi}}; }

std::size_t chain_index(std::initializer_list<int> levels) {
  std::size_t i = 0;
  for (int l : levels) i = i * 3 + static_cast<std::size_t>(l);
  return i;
}

GateSpec random_spec(std::size_t n) { return spec(n, testing::uniform(0, pi), testing::uniform(0, 2 * pi)); }

// Product of series exponentials of the fully embedded interval Hamiltonians.
Operator oracle_propagator(const PulseSchedule& s) {
  const HilbertLayout l(s.spec.num_qubits());
  Operator u = Operator::identity(l.dim());
  for (const auto& iv : s.intervals) {
    Operator h(l.dim());
    for (const auto& c : iv.couplings) {
      const Operator t = pair_transition(c.kind, iv.ions, l);
      h += c.amplitude * t + std::conj(c.amplitude) * t.adjoint();
    }
    u = testing::naive_product(testing::series_expm(h, iv.duration), u);
  }
  return u;
}

Interval single(std::size_t index, CouplingKind kind, cplx amp, double area) {
  Interval iv;
  iv.index = index;
  iv.ions = {1, 2};
  iv.couplings = {{kind, amp}};
  iv.pulse_area = area;
  iv.duration = area / std::abs(amp);
  return iv;
}

}  // namespace

TEST_CASE("pair transitions") {
  const HilbertLayout two(2), three(3);
  const Operator t = pair_transition(CouplingKind::ee_from_10, {1, 2}, two);
  CHECK(t.nonzeros() == 1);
  CHECK(t(chain_index({2, 2}), chain_index({1, 0})) == cplx(1.0));
  CHECK(pair_transition(CouplingKind::ee_from_11, {1, 2}, three).nonzeros() == 3);
  const Operator m = pair_transition(CouplingKind::oneE_from_e1, {2, 3}, three);
  CHECK(m(chain_index({0, 1, 2}), chain_index({0, 2, 1})) == cplx(1.0));
  CHECK(pair_transition(CouplingKind::oneE_from_e0, {1, 2}, two)(chain_index({1, 2}), chain_index({2, 0})) ==
        cplx(1.0));
  CHECK_THROWS_AS(pair_transition(CouplingKind::ee_from_10, {1, 1}, two), std::invalid_argument);
  CHECK_THROWS_AS(pair_transition(CouplingKind::ee_from_10, {2, 3}, two), std::out_of_range);

  const PulseSchedule s = compile(spec(2, 1.0, 0.3), 5.0);
  const Operator h = effective_hamiltonian(s.intervals[1], HilbertLayout(3));
  CHECK(h.is_hermitian(0.0));
  CHECK(h.nonzeros() == 2 * 2 * 3);
  CHECK_THROWS_AS(effective_hamiltonian(s.intervals[1], HilbertLayout(3, 2)), std::invalid_argument);
}

TEST_CASE("two-qubit closed form matches exponentiation at random times") {
  for (int trial = 0; trial < 50; ++trial) {
    const GateSpec g = random_spec(1);
    const double w = testing::uniform(0.5, 5.0);
    PulseSchedule s = compile(g, w);
    const double t = testing::uniform(0, 2 * s.intervals[0].duration);
    s.intervals[0].duration = t;
    CHECK(max_abs_diff(propagate(s), closed_form_two_qubit(t, g, w)) < 1e-12);
  }
  CHECK_THROWS_AS(closed_form_two_qubit(1.0, spec(2, 0, 0), 1.0), std::invalid_argument);
}

TEST_CASE("propagate matches an independent series oracle") {
  for (std::size_t n : {1, 2}) {
    const PulseSchedule s = compile(random_spec(n), testing::uniform(1, 3), CompileOptions{1.3, 0.9});
    CHECK(max_abs_diff(propagate(s), oracle_propagator(s)) < 1e-10);
  }
}

TEST_CASE("dark state is fixed, bright state flips sign") {
  for (std::size_t n : {1, 2, 3}) {
    const GateSpec g = random_spec(n);
    const PulseSchedule s = compile(g, 2.0);
    const Operator u = propagate(s);
    const BrightDark bd = bright_dark(g);
    const StateVector d = u * bd.dark, b = u * bd.bright;
    for (std::size_t i = 0; i < d.dim(); ++i) {
      CHECK(std::abs(d[i] - bd.dark[i]) < 1e-12);
      CHECK(std::abs(b[i] + bd.bright[i]) < 1e-12);
    }
  }
}

TEST_CASE("computational states with a control in |0> are untouched") {
  const GateSpec g = random_spec(3);
  const Operator u = propagate(compile(g, 2.0));
  const HilbertLayout l(4);
  for (std::size_t i : computational_indices(4)) {
    const auto lv = l.levels_of(i);
    bool all_on = true;
    for (std::size_t k = 0; k < 3; ++k) all_on = all_on && lv[k] == 1;
    if (all_on) continue;
    for (std::size_t r = 0; r < l.dim(); ++r) CHECK(std::abs(u(r, i) - (r == i ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("holonomy conditions hold for compiled schedules") {
  for (std::size_t n : {1, 2, 3, 4}) {
    CAPTURE(n);
    const GateSpec g = random_spec(n);
    const PulseSchedule s = compile(g, 3.0, CompileOptions{1.0, 2.0});
    const HolonomyReport r = verify_holonomy(s, 50, true);
    CHECK(r.cyclicity_residual < 1e-10);
    CHECK(r.transport_residual < 1e-10);
    CHECK(r.samples.size() == 50 * s.intervals.size());
    CHECK(r.samples.front().subspace_population == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.samples.back().subspace_population == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.samples.back().t == doctest::Approx(s.total_duration()).epsilon(1e-12));
    CHECK(gate_error(s, g) < 1e-10);
  }
  CHECK_THROWS_AS(verify_holonomy(compile(spec(1, 0, 0), 1.0), 1), std::invalid_argument);
}

TEST_CASE("a 1% area error breaks cyclicity and the gate") {
  for (std::size_t n : {1, 2, 3}) {
    const GateSpec g = random_spec(n);
    const PulseSchedule s = compile(g, 2.0);
    const std::size_t main = n == 1 ? 1 : n;
    const PulseSchedule bad = perturb_area(s, main, 0.01);
    CHECK(bad.intervals[main - 1].pulse_area == doctest::Approx(1.01 * s.intervals[main - 1].pulse_area));
    const HolonomyReport r = verify_holonomy(bad, 20);
    // |B> leaves the subspace with amplitude sin(0.01 pi)
    CHECK(r.cyclicity_residual > 0.5 * std::sin(0.01 * pi));
    // the gate distance is second order in the area error (~0.5e-3 here)
    CHECK(gate_error(bad, g) > 1e-4);
  }
  CHECK_THROWS_AS(perturb_area(compile(spec(1, 0, 0), 1.0), 2, 0.1), std::out_of_range);
}

TEST_CASE("a dephased second pulse violates parallel transport") {
  // |11> -> c|11> - i s|ee>, then a coupling with a pi/2 phase offset: the
  // evolved subspace now sees <v|H|v> = -2 W s c.
  PulseSchedule s;
  s.spec = spec(1, 0.0, 0.0);
  s.drive = 1.0;
  s.intervals.push_back(single(1, CouplingKind::ee_from_11, 1.0, pi / 4));
  s.intervals.push_back(single(2, CouplingKind::ee_from_11, cplx(0, 1), pi / 4));
  const HolonomyReport r = verify_holonomy(s, 10);
  const double c = std::cos(pi / 4), sn = std::sin(pi / 4);
  CHECK(r.transport_residual == doctest::Approx(2 * sn * c).epsilon(1e-10));
}

TEST_CASE("degenerate schedules") {
  PulseSchedule empty;
  empty.spec = spec(1, 0.0, 0.0);
  CHECK(propagate(empty) == Operator::identity(9));
  const HolonomyReport r = verify_holonomy(empty);
  CHECK(r.cyclicity_residual == 0.0);
  CHECK(r.transport_residual == 0.0);

  PulseSchedule zero = empty;
  Interval iv = single(1, CouplingKind::ee_from_10, 0.0, 0.0);
  iv.duration = 0.0;
  zero.intervals.push_back(iv);
  CHECK(propagate(zero) == Operator::identity(9));
  CHECK(verify_holonomy(zero).transport_residual == 0.0);
}

TEST_CASE("propagators are unitary and compose") {
  const PulseSchedule s = compile(random_spec(2), 2.0);
  const Operator u = propagate(s);
  CHECK(testing::unitarity_defect(u) < 1e-12);

  PulseSchedule head = s, tail = s;
  head.intervals.resize(1);
  tail.intervals.erase(tail.intervals.begin());
  CHECK(max_abs_diff(propagate(tail) * propagate(head), u) < 1e-12);
}

TEST_CASE("gate error for the compiled gate family") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const GateSpec g = random_spec(n);
    CHECK(gate_error(compile(g, 1.7, CompileOptions{0.6, 2.4}), g) < 1e-10);
  }
  // CNOT and Toffoli at the bundled operating point
  CHECK(gate_error(compile(spec(1, pi / 2, 0.0), 2 * pi * 49.28), spec(1, pi / 2, 0.0)) < 1e-10);
  CHECK(gate_error(compile(spec(2, pi / 2, 0.0), 2 * pi * 49.28), spec(2, pi / 2, 0.0)) < 1e-10);
  CHECK_THROWS_AS(gate_error(Operator::identity(9), spec(2, 0, 0)), std::invalid_argument);
}

TEST_CASE("subspace projector") {
  const SubspaceProjector p = SubspaceProjector::computational(2);
  CHECK(p.basis().size() == 4);
  const Operator pr = p.projector();
  CHECK(max_abs_diff(pr * pr, pr) == 0.0);
  CHECK(pr.trace() == cplx(4.0));
  StateVector a(3), b(3);
  a[0] = 1.0;
  b[0] = 1.0;
  CHECK_THROWS_AS(SubspaceProjector(3, {a, b}), std::invalid_argument);
}
