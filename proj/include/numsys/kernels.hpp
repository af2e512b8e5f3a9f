#pragma once

// Hot inner loops with a scalar reference implementation and an AVX2+FMA
// variant picked at runtime. The scalar path is the definition; the vector
// path must agree with it to rounding (see tests/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace numsys::kernels {

enum class Isa { scalar, avx2 };

// ISA currently used by the dispatching entry points.
Isa active_isa();
// True when the CPU and the build both support the AVX2 path.
bool avx2_available();
// Pin dispatch to the scalar path (tests, reproducibility runs).
void force_scalar(bool on);
const char* isa_name(Isa isa);

// sum_j w[j] * exp(-s * x[j]). Dirichlet sums (x = log n), Fourier
// integrals on quadrature nodes (s purely imaginary) and Laplace-type
// integrals all reduce to this.
std::complex<double> exp_sum(std::span<const double> w, std::span<const double> x, std::complex<double> s);

// dst[i] += src[i - shift] for shift <= i < dst.size(). Returns true if any
// addition wrapped around 2^64; dst is then unspecified.
bool add_shifted_u64(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::size_t shift);

namespace scalar {
std::complex<double> exp_sum(std::span<const double> w, std::span<const double> x, std::complex<double> s);
bool add_shifted_u64(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::size_t shift);
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_available().
std::complex<double> exp_sum(std::span<const double> w, std::span<const double> x, std::complex<double> s);
bool add_shifted_u64(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::size_t shift);
}  // namespace avx2

}  // namespace numsys::kernels
