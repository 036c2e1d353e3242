#pragma once

#include <complex>
#include <random>
#include <vector>

#include "holo/operator.hpp"

namespace testing {

using holo::cplx;
using holo::Operator;
using holo::StateVector;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline cplx random_cplx() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng()), n(rng())};
}

inline Operator random_matrix(std::size_t dim) {
  Operator m(dim);
  for (auto& v : m.data()) v = random_cplx();
  return m;
}

inline Operator random_hermitian(std::size_t dim) {
  const Operator a = random_matrix(dim);
  Operator h = a + a.adjoint();
  h *= 0.5;
  return h;
}

inline StateVector random_state(std::size_t dim) {
  StateVector v(dim);
  for (auto& a : v.data()) a = random_cplx();
  v.normalize();
  return v;
}

inline double unitarity_defect(const Operator& u) {
  return holo::max_abs_diff(u.adjoint() * u, Operator::identity(u.dim()));
}

// Plain triple loop, independent of the kernel layer.
inline Operator naive_product(const Operator& a, const Operator& b) {
  Operator c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      cplx s{};
      for (std::size_t k = 0; k < a.dim(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

// exp(-i h t) by Taylor series with scaling and squaring; an oracle that
// shares no code with the eigendecomposition path.
inline Operator series_expm(const Operator& h, double t) {
  const std::size_t dim = h.dim();
  double norm = 0.0;
  for (const auto& v : h.data()) norm = std::max(norm, std::abs(v));
  norm *= static_cast<double>(dim) * std::abs(t);
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  Operator x = h;
  x *= cplx(0.0, -t / std::ldexp(1.0, squarings));
  Operator sum = Operator::identity(dim), term = Operator::identity(dim);
  for (int k = 1; k < 30; ++k) {
    term = naive_product(term, x);
    term *= 1.0 / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = naive_product(sum, sum);
  return sum;
}

}  // namespace testing
