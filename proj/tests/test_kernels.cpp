#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holo/kernels.hpp"
#include "support.hpp"

using namespace holo;
namespace k = holo::kernels;

namespace {

std::vector<cplx> random_buffer(std::size_t n, double zero_fraction = 0.0) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = testing::uniform(0, 1) < zero_fraction ? cplx{} : testing::random_cplx();
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const std::size_t kSizes[] = {1, 2, 3, 5, 8, 9, 17, 36, 108};

}  // namespace

TEST_CASE("scalar gemm matches the naive triple loop") {
  for (std::size_t n : kSizes) {
    const Operator a = testing::random_matrix(n), b = testing::random_matrix(n);
    std::vector<cplx> c(n * n);
    k::table(k::Isa::scalar).gemm(n, a.data().data(), b.data().data(), c.data());
    const Operator ref = testing::naive_product(a, b);
    CHECK(max_diff(c, std::vector<cplx>(ref.data().begin(), ref.data().end())) < 1e-12 * n);
  }
}

TEST_CASE("scalar skew_neg_i is -i (K - K^dagger)") {
  const std::size_t n = 7;
  const Operator kk = testing::random_matrix(n);
  std::vector<cplx> out(n * n);
  k::table(k::Isa::scalar).skew_neg_i(n, kk.data().data(), out.data());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      CHECK(std::abs(out[i * n + j] - cplx(0, -1) * (kk(i, j) - std::conj(kk(j, i)))) < 1e-14);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::isa_available(k::Isa::avx2)) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  const auto& s = k::table(k::Isa::scalar);
  const auto& v = k::table(k::Isa::avx2);
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    for (double zeros : {0.0, 0.7}) {
      const auto a = random_buffer(n * n, zeros), b = random_buffer(n * n);
      std::vector<cplx> c1(n * n), c2(n * n);
      s.gemm(n, a.data(), b.data(), c1.data());
      v.gemm(n, a.data(), b.data(), c2.data());
      CHECK(max_diff(c1, c2) < 1e-12 * n);

      const auto x = random_buffer(n);
      std::vector<cplx> y1(n), y2(n);
      s.gemv(n, a.data(), x.data(), y1.data());
      v.gemv(n, a.data(), x.data(), y2.data());
      CHECK(max_diff(y1, y2) < 1e-12 * n);
    }
    const auto kk = random_buffer(n * n);
    std::vector<cplx> o1(n * n), o2(n * n);
    s.skew_neg_i(n, kk.data(), o1.data());
    v.skew_neg_i(n, kk.data(), o2.data());
    CHECK(max_diff(o1, o2) < 1e-14);

    for (std::size_t len : {n, n * n, n * n + 1}) {
      const auto x = random_buffer(len);
      auto y1 = random_buffer(len);
      auto y2 = y1;
      const cplx alpha = testing::random_cplx();
      s.axpy(len, alpha, x.data(), y1.data());
      v.axpy(len, alpha, x.data(), y2.data());
      CHECK(max_diff(y1, y2) < 1e-13);
      CHECK(std::abs(s.norm2(len, x.data()) - v.norm2(len, x.data())) < 1e-12 * len);
    }
  }
}

TEST_CASE("zero-skipping gemm still handles exact zeros and empty rows") {
  const std::size_t n = 6;
  std::vector<cplx> a(n * n), b = random_buffer(n * n), c(n * n, cplx(9, 9));
  a[0 * n + 5] = 2.0;
  for (auto isa : {k::Isa::scalar, k::Isa::avx2}) {
    if (!k::isa_available(isa)) continue;
    k::table(isa).gemm(n, a.data(), b.data(), c.data());
    for (std::size_t j = 0; j < n; ++j) CHECK(c[j] == 2.0 * b[5 * n + j]);
    for (std::size_t i = n; i < n * n; ++i) CHECK(c[i] == cplx{});
  }
}

TEST_CASE("dispatch") {
  CHECK(k::isa_available(k::Isa::scalar));
  const k::Isa before = k::active_isa();
  k::set_active_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  CHECK(k::isa_name(k::Isa::scalar) == "scalar");
  if (!k::isa_available(k::Isa::avx2)) CHECK_THROWS_AS(k::set_active_isa(k::Isa::avx2), std::invalid_argument);
  k::set_active_isa(before);
}

TEST_CASE("operator products are identical under both variants up to rounding") {
  if (!k::isa_available(k::Isa::avx2)) return;
  const Operator a = testing::random_matrix(27), b = testing::random_matrix(27);
  const k::Isa before = k::active_isa();
  k::set_active_isa(k::Isa::scalar);
  const Operator p1 = a * b;
  k::set_active_isa(k::Isa::avx2);
  const Operator p2 = a * b;
  k::set_active_isa(before);
  CHECK(max_abs_diff(p1, p2) < 1e-12);
}
