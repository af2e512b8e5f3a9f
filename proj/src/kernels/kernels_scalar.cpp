#include <cmath>

#include "numsys/kernels.hpp"

namespace numsys::kernels::scalar {

std::complex<double> exp_sum(std::span<const double> w, std::span<const double> x, std::complex<double> s) {
  const double a = s.real(), b = s.imag();
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double m = w[j] * std::exp(-a * x[j]);
    const double t = b * x[j];
    re += m * std::cos(t);
    im -= m * std::sin(t);
  }
  return {re, im};
}

bool add_shifted_u64(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::size_t shift) {
  bool overflow = false;
  for (std::size_t i = shift; i < dst.size(); ++i) {
    const std::uint64_t v = dst[i] + src[i - shift];
    overflow |= v < dst[i];
    dst[i] = v;
  }
  return overflow;
}

}  // namespace numsys::kernels::scalar
