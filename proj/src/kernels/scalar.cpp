#include "holo/kernels.hpp"

namespace holo::kernels::scalar {

// i-k-j ordering; the AVX2 variant accumulates in the same order so the two
// only differ by FMA rounding.
void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < n * n; ++i) c[i] = cplx{};
  for (std::size_t i = 0; i < n; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      if (aik == cplx{}) continue;
      const cplx* brow = b + k * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

void gemv(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    double re = 0.0, im = 0.0;
    const cplx* row = a + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      re += row[j].real() * x[j].real() - row[j].imag() * x[j].imag();
      im += row[j].real() * x[j].imag() + row[j].imag() * x[j].real();
    }
    y[i] = {re, im};
  }
}

void axpy(std::size_t len, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void skew_neg_i(std::size_t n, const cplx* k, cplx* out) {
  // -i (k_ij - conj(k_ji)) = (im(k_ij) + im(k_ji), -re(k_ij) + re(k_ji))
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const cplx kij = k[i * n + j];
      const cplx kji = k[j * n + i];
      out[i * n + j] = {kij.imag() + kji.imag(), kji.real() - kij.real()};
    }
  }
}

double norm2(std::size_t len, const cplx* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += std::norm(x[i]);
  return s;
}

}  // namespace holo::kernels::scalar
