#pragma once

// Fourier coefficients of the density function Psi and their resummation.

#include <map>
#include <string>

#include "numsys/core.hpp"

namespace numsys {

struct FourierTable {
  double beta = 0;
  std::string digits;
  std::map<long, Complex> entries;
  double tol = 0;

  /// Throws DomainError when k is missing.
  Complex at(long k) const;
  /// max_k |psi_hat(-k) - conj(psi_hat(k))| over stored pairs.
  double hermitian_defect() const;
};

/// e^{P(w)} continued to complex w in the strip |Im w| < pi / (2 log beta),
/// written as |d|^w prod_{k>=0} E(beta^{k+w}) prod_{k<0} E(beta^{k+w}) / |d|
/// with E(z) = sum_d e^{-delta z}. Agrees with exp(P(w)) on the real line.
Complex exp_P_complex(double beta, const DigitSet& digits, Complex w);

/// psi_hat(k) = int_0^1 e^{P(w)} e^{2 pi i k w} dw / Gamma(1 + sigma + 2 pi i k / log beta).
///
/// The integral is exponentially small in |k| and so is the Gamma factor; on
/// the real line the quotient loses all digits by |k| = 4. Since e^{P} is
/// analytic and periodic in the strip |Im w| < h, the path is moved to
/// Im w = (h - min(h / 10, 3 / (2 pi |k|))) sign(k). That pulls the factor
/// e^{-2 pi |k| Im w} out exactly and leaves an O(1) integrand for
/// Gauss-Legendre; relative accuracy is about 1e-13 up to |k| = 64.
Complex psi_hat(double beta, const DigitSet& digits, long k, double tol = 1e-12);

/// Entries for |k| <= K.
FourierTable fourier_table(double beta, const DigitSet& digits, long K, double tol = 1e-12);

struct ResumValue {
  double value = 0;  // real part of the partial sum
  double imag = 0;   // imaginary part, a diagnostic that should be tiny
};
/// sum_{|k|<=K} psi_hat(k) e^{2 pi i k x}.
ResumValue resum(double x, const FourierTable& table, long K);

}  // namespace numsys
