#pragma once

// Dense complex arithmetic kernels used by the integrators and propagators.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is chosen once at startup from the CPU
// feature flags (override with HOLO_ISA=scalar|avx2). All matrices are square
// and stored row-major with interleaved real/imaginary parts.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace holo::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // c = a * b for n x n matrices. c must not alias a or b.
  void (*gemm)(std::size_t n, const cplx* a, const cplx* b, cplx* c);
  // y = a * x. y must not alias x.
  void (*gemv)(std::size_t n, const cplx* a, const cplx* x, cplx* y);
  // y += alpha * x
  void (*axpy)(std::size_t len, cplx alpha, const cplx* x, cplx* y);
  // out = -i (k - k^dagger), the Hermitian part of a Lindblad coherent term.
  void (*skew_neg_i)(std::size_t n, const cplx* k, cplx* out);
  // sum |x_i|^2
  double (*norm2)(std::size_t len, const cplx* x);
};

bool isa_available(Isa isa);
const KernelTable& table(Isa isa);

// The table selected for this process.
const KernelTable& active();
Isa active_isa();
// Forces a specific variant. Throws std::invalid_argument if unavailable.
void set_active_isa(Isa isa);

std::string_view isa_name(Isa isa);

// Convenience wrappers over the active table.
void gemm(std::size_t n, std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c);
void gemv(std::size_t n, std::span<const cplx> a, std::span<const cplx> x, std::span<cplx> y);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
double norm2(std::span<const cplx> x);

namespace scalar {
void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void gemv(std::size_t n, const cplx* a, const cplx* x, cplx* y);
void axpy(std::size_t len, cplx alpha, const cplx* x, cplx* y);
void skew_neg_i(std::size_t n, const cplx* k, cplx* out);
double norm2(std::size_t len, const cplx* x);
}  // namespace scalar

#ifdef HOLO_HAVE_AVX2
namespace avx2 {
void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void gemv(std::size_t n, const cplx* a, const cplx* x, cplx* y);
void axpy(std::size_t len, cplx alpha, const cplx* x, cplx* y);
void skew_neg_i(std::size_t n, const cplx* k, cplx* out);
double norm2(std::size_t len, const cplx* x);
}  // namespace avx2
#endif

}  // namespace holo::kernels
