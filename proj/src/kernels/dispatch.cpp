#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "holo/kernels.hpp"

namespace holo::kernels {
namespace {

constexpr KernelTable kScalar{Isa::scalar, scalar::gemm, scalar::gemv, scalar::axpy,
                              scalar::skew_neg_i, scalar::norm2};
#ifdef HOLO_HAVE_AVX2
constexpr KernelTable kAvx2{Isa::avx2, avx2::gemm, avx2::gemv, avx2::axpy, avx2::skew_neg_i,
                            avx2::norm2};
#endif

Isa detect() {
  if (const char* forced = std::getenv("HOLO_ISA")) {
    const std::string name{forced};
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2" && isa_available(Isa::avx2)) return Isa::avx2;
  }
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{&table(detect())};
  return current;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(HOLO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("kernel variant not available on this CPU");
#ifdef HOLO_HAVE_AVX2
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

void set_active_isa(Isa isa) { slot().store(&table(isa), std::memory_order_release); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void gemm(std::size_t n, std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> c) {
  active().gemm(n, a.data(), b.data(), c.data());
}

void gemv(std::size_t n, std::span<const cplx> a, std::span<const cplx> x, std::span<cplx> y) {
  active().gemv(n, a.data(), x.data(), y.data());
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(x.size(), alpha, x.data(), y.data());
}

double norm2(std::span<const cplx> x) { return active().norm2(x.size(), x.data()); }

}  // namespace holo::kernels
