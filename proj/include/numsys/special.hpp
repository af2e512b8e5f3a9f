#pragma once

// Complex Gamma, incomplete Gamma, Gauss-Legendre quadrature and a plain DFT.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "numsys/types.hpp"

namespace numsys {

/// Gamma(s). Lanczos (g = 7, 9 terms) on Re s >= 1/2, reflection below.
/// Throws PoleError at s = 0, -1, -2, ...
Complex gamma_complex(Complex s);
/// 1 / Gamma(s); entire, exactly 0 at the non-positive integers.
Complex rgamma(Complex s);
/// log Gamma(s) for Re s >= 1/2 (principal branch of the Lanczos form).
Complex lgamma_complex(Complex s);

/// Gamma(s, w) = int_w^inf e^{-u} u^{s-1} du for w > 0; w = 0 gives Gamma(s).
///
/// Switching rule: the lower series Gamma(s) - gamma(s, w) when w < |s| + 2,
/// otherwise the Lentz continued fraction. The series result is discarded in
/// favour of the continued fraction when it has lost more than four digits to
/// cancellation or when s sits within 1e-3 of a pole of Gamma(s). For
/// w < 1/2 near a pole a quadrature in u = w e^v is used instead.
Complex upper_incomplete_gamma(Complex s, double w);
/// gamma(s, w) = int_0^w e^{-u} u^{s-1} du (series; s not a pole).
Complex lower_incomplete_gamma(Complex s, double w);
/// Q(s, w) = Gamma(s, w) / Gamma(s), continued to an entire function of s
/// (Q(-n, w) = 0).
Complex gamma_q(Complex s, double w);

struct QuadratureResult {
  Complex value;
  std::size_t nodes_used = 0;
  double est_error = 0;
};

/// n-point Gauss-Legendre rule on [-1, 1], cached after first use.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Gauss-Legendre with node doubling 8, 16, ... until two successive
/// estimates differ by less than tol. Throws ComputeError past max_nodes.
QuadratureResult gl_integrate(const std::function<Complex(double)>& f, double a, double b, double tol,
                              std::size_t max_nodes = 2048);

/// c_k = (1/N) sum_j x_j e^{-2 pi i k j / N} for k = 0..N-1.
std::vector<Complex> dft(std::span<const double> samples);
/// A single coefficient; k may be negative.
Complex dft_coeff(std::span<const double> samples, long k);

}  // namespace numsys
