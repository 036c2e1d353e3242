#pragma once

// Dense complex operators and Hilbert-space bookkeeping for chains of
// three-level ions, optionally coupled to one vibrational mode.
//
// Basis ordering (repo-wide): ion 1 is the slowest index, the phonon mode the
// fastest. Within an ion the levels are |0> = 0, |1> = 1, |e> = 2. Ions are
// numbered from 1 in every public interface, matching the physics labels.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace holo {

using cplx = std::complex<double>;

inline constexpr std::size_t kLevelsPerIon = 3;
inline constexpr int kLevel0 = 0;
inline constexpr int kLevel1 = 1;
inline constexpr int kLevelE = 2;

// Thrown when a tensor product would exceed the configured dimension cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class Operator {
 public:
  Operator() = default;
  explicit Operator(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  Operator(std::size_t dim, std::vector<cplx> entries);
  Operator(std::initializer_list<std::initializer_list<cplx>> rows);

  static Operator identity(std::size_t dim);
  static Operator zero(std::size_t dim) { return Operator(dim); }
  // |ket><bra| on a dim-dimensional space.
  static Operator outer(std::size_t dim, std::size_t ket, std::size_t bra);

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  Operator adjoint() const;
  cplx trace() const;
  double max_abs() const;
  // Largest singular value.
  double op_norm() const;
  bool is_hermitian(double tol = 1e-12) const;
  std::size_t nonzeros(double tol = 0.0) const;

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(cplx s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);
  friend bool operator==(const Operator&, const Operator&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

// Max entrywise |a - b|.
double max_abs_diff(const Operator& a, const Operator& b);

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t dim) : amps_(dim) {}
  explicit StateVector(std::vector<cplx> amps) : amps_(std::move(amps)) {}
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amps_.size(); }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  std::span<cplx> data() { return amps_; }
  std::span<const cplx> data() const { return amps_; }

  double norm() const;
  void normalize();
  // <this|other>
  cplx inner(const StateVector& other) const;
  Operator projector() const;

  StateVector& operator+=(const StateVector& o);
  StateVector& operator*=(cplx s);
  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator*(cplx s, StateVector a) { return a *= s; }

 private:
  std::vector<cplx> amps_;
};

StateVector operator*(const Operator& a, const StateVector& x);

// A validated density operator: Hermitian, unit trace, positive semidefinite
// within the tolerances passed to validate().
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator rho) : rho_(std::move(rho)) {}
  static DensityMatrix pure(const StateVector& psi) { return DensityMatrix(psi.projector()); }

  const Operator& op() const { return rho_; }
  Operator& op() { return rho_; }
  std::size_t dim() const { return rho_.dim(); }
  double purity() const;
  double min_eigenvalue() const;
  // Throws std::domain_error describing the first violated condition.
  void validate(double herm_tol = 1e-10, double trace_tol = 1e-8, double eig_tol = 1e-8) const;

 private:
  Operator rho_;
};

class HilbertLayout {
 public:
  HilbertLayout(std::size_t num_ions, std::optional<std::size_t> fock_cutoff = std::nullopt);

  std::size_t num_ions() const { return num_ions_; }
  bool has_mode() const { return fock_cutoff_.has_value(); }
  std::optional<std::size_t> fock_cutoff() const { return fock_cutoff_; }
  std::size_t mode_dim() const { return fock_cutoff_ ? *fock_cutoff_ + 1 : 1; }
  std::size_t ion_dim() const { return ion_dim_; }
  std::size_t dim() const { return ion_dim_ * mode_dim(); }

  // levels[k] is the level of ion k+1.
  std::size_t index(std::span<const int> levels, std::size_t phonon = 0) const;
  std::vector<int> levels_of(std::size_t index) const;
  std::size_t phonon_of(std::size_t index) const { return index % mode_dim(); }
  // Stride of ion `ion` (1-based) in the global index.
  std::size_t stride(std::size_t ion) const;

  HilbertLayout without_mode() const { return HilbertLayout(num_ions_); }

 private:
  std::size_t num_ions_;
  std::optional<std::size_t> fock_cutoff_;
  std::size_t ion_dim_;
};

inline constexpr std::size_t kDefaultDimensionCap = 10'000;

Operator kron(const Operator& a, const Operator& b, std::size_t cap = kDefaultDimensionCap);

// Places `local` (acting on 3^|ions| levels, ordered as listed) onto the given
// ions of `layout`; identity on every other ion and on the mode.
Operator embed(const Operator& local, std::span<const std::size_t> ions, const HilbertLayout& layout);
Operator embed(const Operator& local, std::initializer_list<std::size_t> ions, const HilbertLayout& layout);

// embed(local, ions, layout) * block for a dim x cols row-major block, without
// forming the embedded operator.
std::vector<cplx> apply_embedded(const Operator& local, std::span<const std::size_t> ions,
                                 const HilbertLayout& layout, std::span<const cplx> block, std::size_t cols);

// Tensor product of a chain operator (dim = layout.ion_dim()) with a mode operator.
Operator with_mode(const Operator& chain, const Operator& mode, const HilbertLayout& layout);

struct LadderOps {
  Operator a;
  Operator a_dagger;
};
LadderOps ladder_ops(std::size_t fock_cutoff);

// exp(-i h t) for Hermitian h, via eigendecomposition.
Operator expm(const Operator& h, double t, double herm_tol = 1e-10);

// Eigendecomposition of a Hermitian operator, reusable across many times t.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const Operator& h, double herm_tol = 1e-10);
  Operator at(double t) const;
  // exp(-i h t) * block, where block is dim x cols, row-major.
  std::vector<cplx> apply(double t, std::span<const cplx> block, std::size_t cols) const;
  std::span<const double> eigenvalues() const { return evals_; }

 private:
  std::size_t dim_;
  std::vector<double> evals_;
  std::vector<cplx> evecs_;  // column k is eigenvector k, row-major storage
};

DensityMatrix partial_trace_mode(const DensityMatrix& rho, const HilbertLayout& layout);

}  // namespace holo
