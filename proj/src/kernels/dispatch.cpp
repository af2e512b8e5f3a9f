#include <atomic>

#include "numsys/kernels.hpp"

namespace numsys::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool detect_avx2() {
#if defined(NUMSYS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

bool avx2_available() {
  static const bool ok = detect_avx2();
  return ok;
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

Isa active_isa() {
  if (!g_force_scalar.load(std::memory_order_relaxed) && avx2_available()) return Isa::avx2;
  return Isa::scalar;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

std::complex<double> exp_sum(std::span<const double> w, std::span<const double> x, std::complex<double> s) {
#ifdef NUMSYS_HAVE_AVX2_TU
  if (active_isa() == Isa::avx2) return avx2::exp_sum(w, x, s);
#endif
  return scalar::exp_sum(w, x, s);
}

bool add_shifted_u64(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::size_t shift) {
#ifdef NUMSYS_HAVE_AVX2_TU
  if (active_isa() == Isa::avx2) return avx2::add_shifted_u64(dst, src, shift);
#endif
  return scalar::add_shifted_u64(dst, src, shift);
}

}  // namespace numsys::kernels
