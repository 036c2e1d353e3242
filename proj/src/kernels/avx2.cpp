// Built with -mavx2 -mfma; only reached when the CPU reports both features.

#include <immintrin.h>

#include "holo/kernels.hpp"

namespace holo::kernels::avx2 {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// (ar + i ai) * b for two packed complexes in b.
inline __m256d cmul_broadcast(__m256d ar, __m256d ai, __m256d b) {
  const __m256d b_swapped = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, b_swapped));
}

// Elementwise complex product of two packed pairs.
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d ar = _mm256_movedup_pd(a);
  const __m256d ai = _mm256_permute_pd(a, 0b1111);
  return cmul_broadcast(ar, ai, b);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < n * n; ++i) c[i] = cplx{};
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = as_doubles(c + i * n);
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      if (aik == cplx{}) continue;
      const __m256d ar = _mm256_set1_pd(aik.real());
      const __m256d ai = _mm256_set1_pd(aik.imag());
      const double* brow = as_doubles(b + k * n);
      for (std::size_t p = 0; p < pairs; ++p) {
        const __m256d bv = _mm256_loadu_pd(brow + 4 * p);
        const __m256d cv = _mm256_loadu_pd(crow + 4 * p);
        _mm256_storeu_pd(crow + 4 * p, _mm256_add_pd(cv, cmul_broadcast(ar, ai, bv)));
      }
      if (n % 2) c[i * n + n - 1] += aik * b[k * n + n - 1];
    }
  }
}

void gemv(std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  const std::size_t pairs = n / 2;
  const double* xd = as_doubles(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = as_doubles(a + i * n);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t p = 0; p < pairs; ++p) {
      acc = _mm256_add_pd(acc, cmul(_mm256_loadu_pd(row + 4 * p), _mm256_loadu_pd(xd + 4 * p)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    cplx sum{lanes[0] + lanes[2], lanes[1] + lanes[3]};
    if (n % 2) sum += a[i * n + n - 1] * x[n - 1];
    y[i] = sum;
  }
}

void axpy(std::size_t len, cplx alpha, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const std::size_t pairs = len / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    const __m256d yv = _mm256_loadu_pd(yd + 4 * p);
    _mm256_storeu_pd(yd + 4 * p, _mm256_add_pd(yv, cmul_broadcast(ar, ai, _mm256_loadu_pd(xd + 4 * p))));
  }
  if (len % 2) y[len - 1] += alpha * x[len - 1];
}

void skew_neg_i(std::size_t n, const cplx* k, cplx* out) {
  // Per complex lane: (im k_ij + im k_ji, re k_ji - re k_ij).
  const __m256d flip_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = as_doubles(k + i * n);
    double* orow = as_doubles(out + i * n);
    for (std::size_t p = 0; p < pairs; ++p) {
      const std::size_t j = 2 * p;
      const __m256d v = _mm256_loadu_pd(row + 4 * p);
      const __m128d w0 = _mm_loadu_pd(as_doubles(k + j * n + i));
      const __m128d w1 = _mm_loadu_pd(as_doubles(k + (j + 1) * n + i));
      const __m256d w = _mm256_set_m128d(w1, w0);
      const __m256d vs = _mm256_xor_pd(_mm256_permute_pd(v, 0b0101), flip_odd);
      const __m256d ws = _mm256_permute_pd(w, 0b0101);
      _mm256_storeu_pd(orow + 4 * p, _mm256_add_pd(ws, vs));
    }
    if (n % 2) {
      const std::size_t j = n - 1;
      const cplx kij = k[i * n + j];
      const cplx kji = k[j * n + i];
      out[i * n + j] = {kij.imag() + kji.imag(), kji.real() - kij.real()};
    }
  }
}

double norm2(std::size_t len, const cplx* x) {
  const double* xd = as_doubles(x);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t pairs = len / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    const __m256d v = _mm256_loadu_pd(xd + 4 * p);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  if (len % 2) s += std::norm(x[len - 1]);
  return s;
}

}  // namespace holo::kernels::avx2
