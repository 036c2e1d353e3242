#include "holo/full_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "holo/effective_sim.hpp"
#include "holo/kernels.hpp"

namespace holo {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_step(double dt, const SystemParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (params.delta > 0.0 && dt > (kTwoPi / params.delta) / 40.0 * (1 + 1e-12))
    throw std::invalid_argument("time step " + fmt(dt) + " s exceeds (2 pi / delta) / 40 = " +
                                fmt(kTwoPi / params.delta / 40.0) + " s");
}

std::size_t step_count(double duration, double dt) {
  if (duration <= 0.0) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration / dt * (1 - 1e-12))));
}

// Decay bookkeeping: per ion, the indices with that ion in |e> and its stride.
struct DecayPlan {
  double g0 = 0.0, g1 = 0.0;  // sqrt rates
  std::vector<std::size_t> strides;
  std::vector<std::vector<std::size_t>> excited;
  std::vector<double> loss;  // diagonal of sum L^dagger L

  bool active() const { return g0 != 0.0 || g1 != 0.0; }
};

DecayPlan make_decay(const SystemParams& params, const HilbertLayout& layout) {
  DecayPlan plan;
  plan.g0 = std::sqrt(params.gamma_e0);
  plan.g1 = std::sqrt(params.gamma_e1);
  plan.loss.assign(layout.dim(), 0.0);
  for (std::size_t ion = 1; ion <= layout.num_ions(); ++ion) {
    const std::size_t s = layout.stride(ion);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < layout.dim(); ++i)
      if ((i / s) % kLevelsPerIon == static_cast<std::size_t>(kLevelE)) {
        idx.push_back(i);
        plan.loss[i] += params.gamma_e0 + params.gamma_e1;
      }
    plan.strides.push_back(s);
    plan.excited.push_back(std::move(idx));
  }
  return plan;
}

// Fills h with H(t) - (i/2) sum L^dagger L (the latter only when with_loss).
void fill_hamiltonian(const SegmentHamiltonian& seg, double t, double delta, const DecayPlan& decay, bool with_loss,
                      std::vector<cplx>& h, std::size_t dim) {
  std::fill(h.begin(), h.end(), cplx{});
  for (const auto& term : seg.terms) {
    const cplx phase = term.frame_sign == 0 ? cplx(1.0) : std::polar(1.0, term.frame_sign * delta * t);
    for (const auto& e : term.entries) {
      const cplx v = phase * e.value;
      h[e.row * dim + e.col] += v;
      h[e.col * dim + e.row] += std::conj(v);
    }
  }
  if (with_loss)
    for (std::size_t i = 0; i < dim; ++i) h[i * dim + i] += cplx(0.0, -0.5 * decay.loss[i]);
}

void add_jumps(const DecayPlan& decay, std::span<const cplx> rho, std::span<cplx> out, std::size_t dim) {
  if (!decay.active()) return;
  const double g[2] = {decay.g0, decay.g1};
  for (std::size_t k = 0; k < decay.strides.size(); ++k) {
    const std::size_t s = decay.strides[k];
    const auto& ex = decay.excited[k];
    for (std::size_t i : ex)
      for (std::size_t j : ex) {
        const cplx v = rho[i * dim + j];
        if (v == cplx{}) continue;
        for (std::size_t a = 0; a < 2; ++a) {
          const std::size_t row = i - (2 - a) * s;
          for (std::size_t b = 0; b < 2; ++b) out[row * dim + (j - (2 - b) * s)] += g[a] * g[b] * v;
        }
      }
  }
}

struct Sampler {
  const EvolveOptions& options;
  const HilbertLayout& layout;

  double population_pure(std::span<const cplx> psi, std::size_t chain) const {
    const std::size_t m = layout.mode_dim();
    double p = 0.0;
    for (std::size_t n = 0; n < m; ++n) p += std::norm(psi[chain * m + n]);
    return p;
  }
  double population_mixed(std::span<const cplx> rho, std::size_t chain) const {
    const std::size_t m = layout.mode_dim(), dim = layout.dim();
    double p = 0.0;
    for (std::size_t n = 0; n < m; ++n) p += rho[(chain * m + n) * dim + chain * m + n].real();
    return p;
  }

  TimeSample pure(double t, std::span<const cplx> psi) const {
    TimeSample s;
    s.t = t;
    for (std::size_t i : options.tracked) s.populations.push_back(population_pure(psi, i));
    s.trace = kernels::norm2(psi);
    if (options.target) {
      const std::size_t m = layout.mode_dim();
      for (std::size_t n = 0; n < m; ++n) {
        cplx a{};
        for (std::size_t c = 0; c < options.target->dim(); ++c)
          a += std::conj((*options.target)[c]) * psi[c * m + n];
        s.fidelity += std::norm(a);
      }
    }
    return s;
  }

  TimeSample mixed(double t, std::span<const cplx> rho) const {
    TimeSample s;
    s.t = t;
    const std::size_t dim = layout.dim(), m = layout.mode_dim();
    for (std::size_t i : options.tracked) s.populations.push_back(population_mixed(rho, i));
    for (std::size_t i = 0; i < dim; ++i) s.trace += rho[i * dim + i].real();
    if (options.target) {
      const StateVector& tg = *options.target;
      std::vector<std::size_t> support;
      for (std::size_t c = 0; c < tg.dim(); ++c)
        if (tg[c] != cplx{}) support.push_back(c);
      cplx f{};
      for (std::size_t a : support)
        for (std::size_t b : support)
          for (std::size_t n = 0; n < m; ++n) f += std::conj(tg[a]) * rho[(a * m + n) * dim + b * m + n] * tg[b];
      s.fidelity = f.real();
    }
    return s;
  }
};

void check_segments(std::span<const SegmentHamiltonian> segments, std::size_t dim) {
  for (const auto& seg : segments)
    for (const auto& term : seg.terms)
      for (const auto& e : term.entries)
        if (e.row >= dim || e.col >= dim) throw std::invalid_argument("segment term outside the layout");
}

std::vector<SegmentHamiltonian> build_all(std::span<const DriveSegment> segments, const SystemParams& params,
                                          const HilbertLayout& layout) {
  std::vector<SegmentHamiltonian> out;
  for (const auto& s : segments) out.push_back(segment_hamiltonian(s, params, layout));
  return out;
}

}  // namespace

SegmentHamiltonian segment_hamiltonian(const DriveSegment& segment, const SystemParams& params,
                                       const HilbertLayout& layout) {
  if (!layout.has_mode()) throw std::invalid_argument("full model requires a layout with the phonon mode");
  SegmentHamiltonian out;
  out.duration = segment.duration;
  const std::size_t m = layout.mode_dim(), dim = layout.dim();
  for (const auto& laser : segment.lasers) {
    if (laser.ion < 1 || laser.ion > layout.num_ions())
      throw std::out_of_range("laser references ion " + std::to_string(laser.ion) + " outside the layout");
    if (laser.phase_sign != 1 && laser.phase_sign != -1) throw std::invalid_argument("laser phase_sign must be +1 or -1");
    const std::size_t lower = laser.transition == Transition::zero_e ? kLevel0 : kLevel1;
    const std::size_t s = layout.stride(laser.ion);
    const cplx amp(0.0, params.eta * laser.signed_rabi());
    DriveTerm term;
    term.frame_sign = laser.frame_sign();
    if (amp == cplx{}) continue;
    for (std::size_t i = 0; i < dim; ++i) {
      if ((i / s) % kLevelsPerIon != lower) continue;
      const std::size_t n = i % m;
      const std::size_t excited = i + (static_cast<std::size_t>(kLevelE) - lower) * s;
      if (laser.creates_phonon()) {
        if (n + 1 >= m) continue;
        term.entries.push_back({excited + 1, i, amp * std::sqrt(static_cast<double>(n + 1))});
      } else {
        if (n == 0) continue;
        term.entries.push_back({excited - 1, i, amp * std::sqrt(static_cast<double>(n))});
      }
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

SegmentHamiltonian effective_segment(const Interval& interval, const HilbertLayout& layout) {
  if (layout.has_mode()) throw std::invalid_argument("effective model uses a layout without the mode");
  SegmentHamiltonian out;
  out.duration = interval.duration;
  for (const auto& c : interval.couplings) {
    const Operator op = pair_transition(c.kind, interval.ions, layout);
    DriveTerm term;
    for (std::size_t r = 0; r < op.dim(); ++r)
      for (std::size_t col = 0; col < op.dim(); ++col)
        if (op(r, col) != cplx{}) term.entries.push_back({r, col, c.amplitude * op(r, col)});
    out.terms.push_back(std::move(term));
  }
  return out;
}

Operator assemble(const SegmentHamiltonian& segment, double t, double delta, std::size_t dim) {
  std::vector<cplx> h(dim * dim);
  fill_hamiltonian(segment, t, delta, DecayPlan{}, false, h, dim);
  return Operator(dim, std::move(h));
}

Operator full_hamiltonian(double t, const DriveSegment& segment, const SystemParams& params,
                          const HilbertLayout& layout) {
  return assemble(segment_hamiltonian(segment, params, layout), t, params.delta, layout.dim());
}

std::vector<DriveSegment> segments_from_schedule(const PulseSchedule& schedule) {
  std::vector<DriveSegment> out;
  for (const auto& iv : schedule.intervals) {
    if (!iv.lasers)
      throw EffectiveOnlyError("interval " + std::to_string(iv.index) +
                               " is effective-only; the full model is undefined for it");
    out.push_back({iv.duration, *iv.lasers});
  }
  return out;
}

UnitaryRun propagate_unitary(std::span<const SegmentHamiltonian> segments, const StateVector& psi0,
                             const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options) {
  check_step(options.dt, params);
  const std::size_t dim = layout.dim();
  if (psi0.dim() != dim) throw std::invalid_argument("propagate_unitary: state dimension does not match the layout");
  check_segments(segments, dim);
  const DecayPlan decay = make_decay(params, layout);
  const Sampler sampler{options, layout};
  const auto& kt = kernels::active();

  UnitaryRun run;
  std::vector<cplx> y(psi0.data().begin(), psi0.data().end());
  std::vector<cplx> h0(dim * dim), hm(dim * dim), h1(dim * dim);
  std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const cplx minus_i(0.0, -1.0);
  auto rhs = [&](const std::vector<cplx>& h, const std::vector<cplx>& x, std::vector<cplx>& out) {
    kt.gemv(dim, h.data(), x.data(), out.data());
    for (auto& v : out) v *= minus_i;
  };

  if (options.sample_every) run.samples.push_back(sampler.pure(0.0, y));
  double t0 = 0.0;
  for (const auto& seg : segments) {
    const std::size_t n = step_count(seg.duration, options.dt);
    const double h = n ? seg.duration / static_cast<double>(n) : 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double t = t0 + static_cast<double>(s) * h;
      fill_hamiltonian(seg, t, params.delta, decay, options.no_jump, h0, dim);
      fill_hamiltonian(seg, t + h / 2, params.delta, decay, options.no_jump, hm, dim);
      fill_hamiltonian(seg, t + h, params.delta, decay, options.no_jump, h1, dim);
      rhs(h0, y, k1);
      tmp = y;
      kt.axpy(dim, h / 2, k1.data(), tmp.data());
      rhs(hm, tmp, k2);
      tmp = y;
      kt.axpy(dim, h / 2, k2.data(), tmp.data());
      rhs(hm, tmp, k3);
      tmp = y;
      kt.axpy(dim, h, k3.data(), tmp.data());
      rhs(h1, tmp, k4);
      kt.axpy(dim, h / 6, k1.data(), y.data());
      kt.axpy(dim, h / 3, k2.data(), y.data());
      kt.axpy(dim, h / 3, k3.data(), y.data());
      kt.axpy(dim, h / 6, k4.data(), y.data());
      ++run.steps;

      if (!options.no_jump) {
        const double drift = std::abs(std::sqrt(kt.norm2(dim, y.data())) - 1.0);
        run.max_norm_error = std::max(run.max_norm_error, drift);
        if (!(drift <= options.abort_tolerance))
          throw NumericAbort("norm drift " + fmt(drift) + " at t = " + fmt(t + h) + " s (step " +
                             std::to_string(run.steps) + ")");
      }
      if (options.sample_every && run.steps % options.sample_every == 0) run.samples.push_back(sampler.pure(t + h, y));
    }
    t0 += seg.duration;
  }
  if (options.sample_every && (run.samples.empty() || run.samples.back().t != t0))
    run.samples.push_back(sampler.pure(t0, y));
  run.psi = StateVector(std::move(y));
  return run;
}

LindbladRun lindblad_evolve(std::span<const SegmentHamiltonian> segments, const DensityMatrix& rho0,
                            const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options) {
  check_step(options.dt, params);
  const std::size_t dim = layout.dim(), n2 = dim * dim;
  if (rho0.dim() != dim) throw std::invalid_argument("lindblad_evolve: state dimension does not match the layout");
  rho0.validate();
  check_segments(segments, dim);
  const DecayPlan decay = make_decay(params, layout);
  const Sampler sampler{options, layout};
  const auto& kt = kernels::active();

  LindbladRun run;
  std::vector<cplx> y(rho0.op().data().begin(), rho0.op().data().end());
  std::vector<cplx> h0(n2), hm(n2), h1(n2);
  std::vector<cplx> k1(n2), k2(n2), k3(n2), k4(n2), tmp(n2), work(n2);
  auto rhs = [&](const std::vector<cplx>& h, const std::vector<cplx>& x, std::vector<cplx>& out) {
    kt.gemm(dim, h.data(), x.data(), work.data());
    kt.skew_neg_i(dim, work.data(), out.data());
    add_jumps(decay, x, out, dim);
  };
  auto checkpoint = [&](double t) {
    const double ev = DensityMatrix(Operator(dim, y)).min_eigenvalue();
    run.min_eigenvalue = (t == 0.0) ? ev : std::min(run.min_eigenvalue, ev);
  };

  checkpoint(0.0);
  if (options.sample_every) run.samples.push_back(sampler.mixed(0.0, y));
  double t0 = 0.0;
  for (const auto& seg : segments) {
    const std::size_t n = step_count(seg.duration, options.dt);
    const double h = n ? seg.duration / static_cast<double>(n) : 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double t = t0 + static_cast<double>(s) * h;
      fill_hamiltonian(seg, t, params.delta, decay, true, h0, dim);
      fill_hamiltonian(seg, t + h / 2, params.delta, decay, true, hm, dim);
      fill_hamiltonian(seg, t + h, params.delta, decay, true, h1, dim);
      rhs(h0, y, k1);
      tmp = y;
      kt.axpy(n2, h / 2, k1.data(), tmp.data());
      rhs(hm, tmp, k2);
      tmp = y;
      kt.axpy(n2, h / 2, k2.data(), tmp.data());
      rhs(hm, tmp, k3);
      tmp = y;
      kt.axpy(n2, h, k3.data(), tmp.data());
      rhs(h1, tmp, k4);
      kt.axpy(n2, h / 6, k1.data(), y.data());
      kt.axpy(n2, h / 3, k2.data(), y.data());
      kt.axpy(n2, h / 3, k3.data(), y.data());
      kt.axpy(n2, h / 6, k4.data(), y.data());
      ++run.steps;

      cplx tr{};
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
          const cplx a = 0.5 * (y[i * dim + j] + std::conj(y[j * dim + i]));
          y[i * dim + j] = a;
          y[j * dim + i] = std::conj(a);
        }
        y[i * dim + i] = y[i * dim + i].real();
        tr += y[i * dim + i];
      }
      const double drift = std::abs(tr - 1.0);
      run.max_trace_error = std::max(run.max_trace_error, drift);
      if (!(drift <= options.abort_tolerance))
        throw NumericAbort("trace drift " + fmt(drift) + " at t = " + fmt(t + h) + " s (step " +
                           std::to_string(run.steps) + ")");
      if (options.sample_every && run.steps % options.sample_every == 0) run.samples.push_back(sampler.mixed(t + h, y));
    }
    t0 += seg.duration;
    checkpoint(t0);
  }
  if (options.sample_every && (run.samples.empty() || run.samples.back().t != t0))
    run.samples.push_back(sampler.mixed(t0, y));
  run.rho = DensityMatrix(Operator(dim, std::move(y)));
  return run;
}

UnitaryRun propagate_unitary(std::span<const DriveSegment> segments, const StateVector& psi0,
                             const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options) {
  const auto built = build_all(segments, params, layout);
  return propagate_unitary(std::span<const SegmentHamiltonian>(built), psi0, params, layout, options);
}

LindbladRun lindblad_evolve(std::span<const DriveSegment> segments, const DensityMatrix& rho0,
                            const SystemParams& params, const HilbertLayout& layout, const EvolveOptions& options) {
  const auto built = build_all(segments, params, layout);
  return lindblad_evolve(std::span<const SegmentHamiltonian>(built), rho0, params, layout, options);
}

StateVector initial_state(const StateVector& qubit_state, const HilbertLayout& layout, std::size_t fock) {
  const StateVector chain = embed_in_chain(qubit_state, layout.num_ions());
  if (!layout.has_mode()) return chain;
  if (fock >= layout.mode_dim()) throw std::out_of_range("initial Fock state beyond the cutoff");
  StateVector out(layout.dim());
  for (std::size_t i = 0; i < chain.dim(); ++i) out[i * layout.mode_dim() + fock] = chain[i];
  return out;
}

StateVector ideal_output(const GateSpec& spec, const StateVector& psi0) {
  if (psi0.dim() != spec.qubit_dim()) throw std::invalid_argument("input state dimension does not match the gate");
  return embed_in_chain(controlled_sigma(spec) * psi0, spec.num_qubits());
}

FidelityResult gate_fidelity(const DensityMatrix& rho_tau, const GateSpec& spec, const StateVector& psi0,
                             const HilbertLayout& layout) {
  if (layout.num_ions() != spec.num_qubits()) throw std::invalid_argument("gate_fidelity: layout does not match the gate");
  const DensityMatrix ions = layout.has_mode() ? partial_trace_mode(rho_tau, layout) : rho_tau;
  const StateVector target = ideal_output(spec, psi0);
  const Operator& r = ions.op();

  FidelityResult out;
  cplx f{};
  for (std::size_t a = 0; a < target.dim(); ++a) {
    if (target[a] == cplx{}) continue;
    for (std::size_t b = 0; b < target.dim(); ++b)
      if (target[b] != cplx{}) f += std::conj(target[a]) * r(a, b) * target[b];
  }
  out.fidelity = f.real();
  double inside = 0.0;
  for (std::size_t i : computational_indices(spec.num_qubits())) inside += r(i, i).real();
  out.leakage = 1.0 - inside;
  out.trace_error = std::abs(rho_tau.op().trace() - 1.0);
  return out;
}

FidelityRun run_fidelity(const PulseSchedule& schedule, const SystemParams& params, const StateVector& psi0,
                         const FidelityRequest& request) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t q = schedule.spec.num_qubits();

  std::optional<HilbertLayout> layout_opt;
  std::vector<SegmentHamiltonian> segments;
  if (request.model == Model::full) {
    layout_opt.emplace(q, params.fock_cutoff);
    for (const auto& s : segments_from_schedule(schedule)) segments.push_back(segment_hamiltonian(s, params, *layout_opt));
  } else {
    layout_opt.emplace(q);
    for (const auto& iv : schedule.intervals) segments.push_back(effective_segment(iv, *layout_opt));
  }
  const HilbertLayout& layout = *layout_opt;
  const StateVector psi = initial_state(psi0, layout, layout.has_mode() ? params.initial_fock : 0);

  EvolveOptions opts = request.evolve;
  if (!opts.target) opts.target = ideal_output(schedule.spec, psi0);

  FidelityRun run;
  if (request.method == Method::density_matrix) {
    opts.no_jump = false;
    LindbladRun lr = lindblad_evolve(std::span<const SegmentHamiltonian>(segments), DensityMatrix::pure(psi), params,
                                     layout, opts);
    run.result = gate_fidelity(lr.rho, schedule.spec, psi0, layout);
    run.result.trace_error = lr.max_trace_error;
    run.min_eigenvalue = lr.min_eigenvalue;
    run.steps = lr.steps;
    run.samples = std::move(lr.samples);
  } else {
    opts.no_jump = true;
    UnitaryRun ur = propagate_unitary(std::span<const SegmentHamiltonian>(segments), psi, params, layout, opts);
    run.result = gate_fidelity(DensityMatrix::pure(ur.psi), schedule.spec, psi0, layout);
    run.result.trace_error = 0.0;
    run.steps = ur.steps;
    run.samples = std::move(ur.samples);
  }
  run.result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

ClosedSystemFidelity closed_system_fidelity(const PulseSchedule& schedule, const SystemParams& params, double dt) {
  SystemParams closed = params;
  closed.gamma_e0 = closed.gamma_e1 = 0.0;
  closed.validate();
  const HilbertLayout layout(schedule.spec.num_qubits(), closed.fock_cutoff);
  std::vector<SegmentHamiltonian> segments;
  for (const auto& s : segments_from_schedule(schedule)) segments.push_back(segment_hamiltonian(s, closed, layout));

  EvolveOptions opts;
  opts.dt = dt;
  ClosedSystemFidelity out{0.0, 1.0};
  const std::size_t qd = schedule.spec.qubit_dim();
  for (std::size_t k = 0; k < qd; ++k) {
    const StateVector in = StateVector::basis(qd, k);
    const UnitaryRun ur = propagate_unitary(std::span<const SegmentHamiltonian>(segments),
                                            initial_state(in, layout, closed.initial_fock), closed, layout, opts);
    const double f = gate_fidelity(DensityMatrix::pure(ur.psi), schedule.spec, in, layout).fidelity;
    out.mean += f / static_cast<double>(qd);
    out.min = std::min(out.min, f);
  }
  return out;
}

}  // namespace holo
