#include "holo/operator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "holo/kernels.hpp"

namespace holo {
namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;

ConstMap as_eigen(const Operator& a) { return ConstMap(a.data().data(), a.dim(), a.dim()); }

}  // namespace

Operator::Operator(std::size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) throw std::invalid_argument("Operator: entries length must equal dim^2");
}

Operator::Operator(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw std::invalid_argument("Operator: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Operator Operator::identity(std::size_t dim) {
  Operator m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Operator Operator::outer(std::size_t dim, std::size_t ket, std::size_t bra) {
  Operator m(dim);
  m(ket, bra) = 1.0;
  return m;
}

Operator Operator::adjoint() const {
  Operator m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

cplx Operator::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double Operator::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Operator::op_norm() const {
  if (dim_ == 0) return 0.0;
  Eigen::BDCSVD<RowMat> svd(as_eigen(*this));
  return svd.singularValues()(0);
}

bool Operator::is_hermitian(double tol) const {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
  return true;
}

std::size_t Operator::nonzeros(double tol) const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [tol](const cplx& v) { return std::abs(v) > tol; }));
}

Operator& Operator::operator+=(const Operator& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("Operator +: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("Operator -: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Operator& Operator::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Operator *: dimension mismatch");
  Operator c(a.dim());
  kernels::gemm(a.dim(), a.data(), b.data(), c.data());
  return c;
}

double max_abs_diff(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// ---------------------------------------------------------------------------

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("StateVector::basis: index out of range");
  StateVector v(dim);
  v[index] = 1.0;
  return v;
}

double StateVector::norm() const { return std::sqrt(kernels::norm2(amps_)); }

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("StateVector::normalize: zero vector");
  *this *= 1.0 / n;
}

cplx StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("StateVector::inner: dimension mismatch");
  cplx s{};
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

Operator StateVector::projector() const {
  Operator p(dim());
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t c = 0; c < dim(); ++c) p(r, c) = amps_[r] * std::conj(amps_[c]);
  return p;
}

StateVector& StateVector::operator+=(const StateVector& o) {
  if (o.dim() != dim()) throw std::invalid_argument("StateVector +: dimension mismatch");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
  return *this;
}

StateVector& StateVector::operator*=(cplx s) {
  for (auto& v : amps_) v *= s;
  return *this;
}

StateVector operator*(const Operator& a, const StateVector& x) {
  if (a.dim() != x.dim()) throw std::invalid_argument("Operator * StateVector: dimension mismatch");
  StateVector y(x.dim());
  kernels::gemv(a.dim(), a.data(), x.data(), y.data());
  return y;
}

// ---------------------------------------------------------------------------

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<RowMat> es(as_eigen(rho_), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
  if (!rho_.is_hermitian(herm_tol)) throw std::domain_error("density matrix is not Hermitian");
  const cplx tr = rho_.trace();
  if (std::abs(tr - 1.0) > trace_tol)
    throw std::domain_error("density matrix trace " + std::to_string(tr.real()) + " differs from 1");
  if (min_eigenvalue() < -eig_tol) throw std::domain_error("density matrix has a negative eigenvalue");
}

// ---------------------------------------------------------------------------

HilbertLayout::HilbertLayout(std::size_t num_ions, std::optional<std::size_t> fock_cutoff)
    : num_ions_(num_ions), fock_cutoff_(fock_cutoff), ion_dim_(1) {
  if (num_ions == 0) throw std::invalid_argument("HilbertLayout: need at least one ion");
  for (std::size_t k = 0; k < num_ions; ++k) ion_dim_ *= kLevelsPerIon;
}

std::size_t HilbertLayout::index(std::span<const int> levels, std::size_t phonon) const {
  if (levels.size() != num_ions_) throw std::invalid_argument("HilbertLayout::index: wrong number of levels");
  if (phonon >= mode_dim()) throw std::out_of_range("HilbertLayout::index: phonon number beyond cutoff");
  std::size_t i = 0;
  for (int l : levels) {
    if (l < 0 || l > kLevelE) throw std::out_of_range("HilbertLayout::index: level out of range");
    i = i * kLevelsPerIon + static_cast<std::size_t>(l);
  }
  return i * mode_dim() + phonon;
}

std::vector<int> HilbertLayout::levels_of(std::size_t index) const {
  std::vector<int> levels(num_ions_);
  std::size_t chain = index / mode_dim();
  for (std::size_t k = num_ions_; k-- > 0;) {
    levels[k] = static_cast<int>(chain % kLevelsPerIon);
    chain /= kLevelsPerIon;
  }
  return levels;
}

std::size_t HilbertLayout::stride(std::size_t ion) const {
  if (ion < 1 || ion > num_ions_) throw std::out_of_range("HilbertLayout::stride: ion out of range");
  std::size_t s = mode_dim();
  for (std::size_t k = ion; k < num_ions_; ++k) s *= kLevelsPerIon;
  return s;
}

// ---------------------------------------------------------------------------

Operator kron(const Operator& a, const Operator& b, std::size_t cap) {
  const std::size_t da = a.dim(), db = b.dim();
  if (da != 0 && db > cap / da) throw CapacityError("kron: dimension exceeds cap " + std::to_string(cap));
  const std::size_t d = da * db;
  Operator out(d);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

namespace {

struct EmbeddingPlan {
  std::size_t local_dim = 1;
  std::vector<std::size_t> strides;
};

EmbeddingPlan plan_embedding(const Operator& local, std::span<const std::size_t> ions, const HilbertLayout& layout) {
  EmbeddingPlan plan;
  for (std::size_t k = 0; k < ions.size(); ++k) plan.local_dim *= kLevelsPerIon;
  if (local.dim() != plan.local_dim) throw std::invalid_argument("embed: local dimension does not match 3^|ions|");
  for (std::size_t k = 0; k < ions.size(); ++k) {
    if (ions[k] < 1 || ions[k] > layout.num_ions()) throw std::out_of_range("embed: ion index out of range");
    for (std::size_t m = 0; m < k; ++m)
      if (ions[m] == ions[k]) throw std::invalid_argument("embed: repeated ion index");
    plan.strides.push_back(layout.stride(ions[k]));
  }
  return plan;
}

// Calls fn(row, col, value) for every nonzero of the embedded operator.
template <class Fn>
void for_each_embedded(const Operator& local, const EmbeddingPlan& plan, std::size_t dim, Fn&& fn) {
  const std::size_t nions = plan.strides.size();
  for (std::size_t row = 0; row < dim; ++row) {
    std::size_t local_row = 0, rest = row;
    for (std::size_t k = 0; k < nions; ++k) {
      const std::size_t level = (row / plan.strides[k]) % kLevelsPerIon;
      local_row = local_row * kLevelsPerIon + level;
      rest -= level * plan.strides[k];
    }
    for (std::size_t local_col = 0; local_col < plan.local_dim; ++local_col) {
      const cplx v = local(local_row, local_col);
      if (v == cplx{}) continue;
      std::size_t col = rest, digits = local_col;
      for (std::size_t k = nions; k-- > 0;) {
        col += (digits % kLevelsPerIon) * plan.strides[k];
        digits /= kLevelsPerIon;
      }
      fn(row, col, v);
    }
  }
}

}  // namespace

Operator embed(const Operator& local, std::span<const std::size_t> ions, const HilbertLayout& layout) {
  const EmbeddingPlan plan = plan_embedding(local, ions, layout);
  Operator out(layout.dim());
  for_each_embedded(local, plan, layout.dim(), [&](std::size_t r, std::size_t c, cplx v) { out(r, c) = v; });
  return out;
}

std::vector<cplx> apply_embedded(const Operator& local, std::span<const std::size_t> ions,
                                 const HilbertLayout& layout, std::span<const cplx> block, std::size_t cols) {
  if (block.size() != layout.dim() * cols) throw std::invalid_argument("apply_embedded: block size mismatch");
  const EmbeddingPlan plan = plan_embedding(local, ions, layout);
  std::vector<cplx> out(block.size());
  for_each_embedded(local, plan, layout.dim(), [&](std::size_t r, std::size_t c, cplx v) {
    for (std::size_t j = 0; j < cols; ++j) out[r * cols + j] += v * block[c * cols + j];
  });
  return out;
}

Operator embed(const Operator& local, std::initializer_list<std::size_t> ions, const HilbertLayout& layout) {
  return embed(local, std::span<const std::size_t>(ions.begin(), ions.size()), layout);
}

Operator with_mode(const Operator& chain, const Operator& mode, const HilbertLayout& layout) {
  if (chain.dim() != layout.ion_dim() || mode.dim() != layout.mode_dim())
    throw std::invalid_argument("with_mode: dimensions do not match the layout");
  return kron(chain, mode);
}

LadderOps ladder_ops(std::size_t fock_cutoff) {
  const std::size_t d = fock_cutoff + 1;
  Operator a(d);
  for (std::size_t n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {a, a.adjoint()};
}

// ---------------------------------------------------------------------------

HermitianPropagator::HermitianPropagator(const Operator& h, double herm_tol) : dim_(h.dim()) {
  const double scale = std::max(1.0, h.max_abs());
  if (!h.is_hermitian(herm_tol * scale)) throw std::domain_error("expm: operator is not Hermitian");
  // Symmetrize so rounding in the input cannot bias the solver.
  RowMat sym = 0.5 * (as_eigen(h) + as_eigen(h).adjoint());
  Eigen::SelfAdjointEigenSolver<RowMat> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("expm: eigendecomposition failed");
  evals_.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim_);
  evecs_.resize(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) evecs_[r * dim_ + c] = es.eigenvectors()(r, c);
}

Operator HermitianPropagator::at(double t) const {
  Operator u(dim_);
  std::vector<cplx> phases(dim_);
  for (std::size_t k = 0; k < dim_; ++k) phases[k] = std::polar(1.0, -evals_[k] * t);
  // U = V diag(phases) V^dagger
  std::vector<cplx> vd(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = 0; k < dim_; ++k) vd[r * dim_ + k] = evecs_[r * dim_ + k] * phases[k];
  std::vector<cplx> vh(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) vh[r * dim_ + c] = std::conj(evecs_[c * dim_ + r]);
  kernels::active().gemm(dim_, vd.data(), vh.data(), u.data().data());
  return u;
}

std::vector<cplx> HermitianPropagator::apply(double t, std::span<const cplx> block, std::size_t cols) const {
  if (block.size() != dim_ * cols) throw std::invalid_argument("HermitianPropagator::apply: block size");
  // w = V^dagger block, scaled by phases, then V w.
  std::vector<cplx> w(dim_ * cols);
  for (std::size_t k = 0; k < dim_; ++k) {
    const cplx phase = std::polar(1.0, -evals_[k] * t);
    for (std::size_t r = 0; r < dim_; ++r) {
      const cplx vc = std::conj(evecs_[r * dim_ + k]);
      if (vc == cplx{}) continue;
      for (std::size_t c = 0; c < cols; ++c) w[k * cols + c] += vc * block[r * cols + c];
    }
    for (std::size_t c = 0; c < cols; ++c) w[k * cols + c] *= phase;
  }
  std::vector<cplx> out(dim_ * cols);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = 0; k < dim_; ++k) {
      const cplx v = evecs_[r * dim_ + k];
      if (v == cplx{}) continue;
      for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] += v * w[k * cols + c];
    }
  return out;
}

Operator expm(const Operator& h, double t, double herm_tol) {
  if (h.max_abs() == 0.0) {
    if (!h.is_hermitian(0.0)) throw std::domain_error("expm: operator is not Hermitian");
    return Operator::identity(h.dim());
  }
  return HermitianPropagator(h, herm_tol).at(t);
}

DensityMatrix partial_trace_mode(const DensityMatrix& rho, const HilbertLayout& layout) {
  if (!layout.has_mode()) throw std::invalid_argument("partial_trace_mode: layout has no phonon mode");
  if (rho.dim() != layout.dim()) throw std::invalid_argument("partial_trace_mode: dimension mismatch");
  const std::size_t ions = layout.ion_dim(), m = layout.mode_dim();
  Operator reduced(ions);
  const Operator& full = rho.op();
  for (std::size_t i = 0; i < ions; ++i)
    for (std::size_t j = 0; j < ions; ++j) {
      cplx s{};
      for (std::size_t n = 0; n < m; ++n) s += full(i * m + n, j * m + n);
      reduced(i, j) = s;
    }
  return DensityMatrix(std::move(reduced));
}

}  // namespace holo
