#pragma once

// zeta(s) = sum_{lambda > 0} r(lambda) lambda^{-s}: the Dirichlet series on its
// half-plane of convergence, the meromorphic continuation for geometric
// bases, the continuation past the abscissa for perturbed bases, poles,
// residues and values at the non-positive integers.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "numsys/analytic.hpp"
#include "numsys/core.hpp"
#include "numsys/fourier.hpp"

namespace numsys {

/// r(lambda) for lambda in (0, limit], extended on demand.
class ValueCache {
 public:
  ValueCache(BaseSequence base, DigitSet digits) : base_(std::move(base)), digits_(std::move(digits)) {}
  void ensure(double limit);
  double limit() const { return have_; }
  const std::vector<double>& lambda() const { return lambda_; }
  const std::vector<double>& r() const { return r_; }

 private:
  BaseSequence base_;
  DigitSet digits_;
  double have_ = -1;
  std::vector<double> lambda_, r_;
};

enum class ZetaMethod { direct, continued_geometric, continued_perturbed };
const char* method_name(ZetaMethod m);

struct ZetaTruncations {
  double lambda_cut = 0;  // largest lambda entering the sum
  int ell_cut = 0;        // last c(l) index used (continued_geometric)
  int c_shift = 0;
};

struct ZetaEval {
  Complex s;
  Complex value;
  ZetaMethod method = ZetaMethod::direct;
  ZetaTruncations truncations;
  double est_error = 0;
};

struct PoleInfo {
  int j = 0;
  long k = 0;
  Complex location;  // sigma - j - 2 pi i k / log beta
  Complex residue;
  bool removable_possible = false;  // |residue| < 1e-14
};

struct AbscissaInfo {
  double sigma_c = 0;
  bool boundary_divergent = false;  // terms of the probe sum do not decay
  double partial_sum = 0;           // sum_{h <= H} |d|^{h - log_beta b_h}
  double last_term = 0;
};
/// sigma_c = log_beta|d| and a growth probe of sum_{h<=H} |d|^{h - log_beta b_h}.
AbscissaInfo abscissa(const BaseSequence& base, const DigitSet& digits, int H = 60);

/// Partial Dirichlet sum over lambda <= X plus a tail correction from the
/// Fourier expansion of Psi:
///   sum_{lambda > X} = -X^{-s} S(X) + s sum_k psi_hat(k) alpha^{-z_k} X^{z_k - s} / (s - z_k),
/// z_k = sigma + 2 pi i k / log beta, which replaces S(x) by its main term
/// (x / alpha)^sigma Psi(log_beta(x / alpha)). est_error is the change of
/// the corrected sum between X / beta^2 and X. Bases without alpha get the
/// raw sum and the bound C X^{sigma - Re s} (|s| / (Re s - sigma) + 1) with
/// C = 2 S(X) / X^sigma.
class DirectZeta {
 public:
  DirectZeta(const BaseSequence& base, const DigitSet& digits, double X, long fourier_K = 32);
  /// Requires Re s >= sigma + 0.2.
  ZetaEval eval(Complex s) const;
  double sigma() const { return sigma_; }

 private:
  Complex corrected(Complex s, std::size_t count, double Y, double SY) const;

  double beta_, sigma_, X_;
  std::optional<double> alpha_;
  std::vector<double> r_, log_lambda_, lambda_;
  std::vector<double> S_;  // S(lambda_i), zero representation included
  std::optional<FourierTable> fourier_;
};
ZetaEval zeta_direct(const BaseSequence& base, const DigitSet& digits, Complex s, double X);

/// Continuation for b_k = beta^k with cut point T = beta^{-c}:
///   zeta(s) = sum_lambda r lambda^{-s} Q(s, lambda T) - beta^{-cs} / Gamma(s + 1)
///     + (1 / Gamma(s)) sum_l c(l) beta^{-a c} log(beta) / (beta^a - 1) int_0^1 e^{P(u)} beta^{a u} du,
/// a = s + l - sigma, Q(s, w) = Gamma(s, w) / Gamma(s). The lambda-sum stops
/// where Q has decayed below e^{-40}; the l-sum stops once four successive
/// terms are below tol / 100. At s = -n the 0/0 of 1/Gamma(s) against
/// beta^a - 1 is taken as its limit (-1)^n n!.
class GeometricZeta {
 public:
  GeometricZeta(const BaseSequence& base, const DigitSet& digits, std::optional<int> c_shift = std::nullopt,
                double tol = 1e-12);
  /// Throws PoleError within 1e-6 of a pole location that is not a
  /// non-positive integer.
  ZetaEval eval(Complex s) const;
  int c_shift() const { return c_; }
  int rho() const { return rho_; }
  double sigma() const { return sigma_; }

 private:
  double beta_, sigma_, tol_;
  std::optional<int> sigma_int_;
  int rho_ = 0, c_ = 0;
  PowerSeries c_coeffs_;
  ExpPTable table_;
  mutable ValueCache values_;
};
ZetaEval zeta_continued_geometric(const BaseSequence& base, const DigitSet& digits, Complex s,
                                  std::optional<int> c_shift = std::nullopt, double tol = 1e-12);

/// Residue at sigma - j - 2 pi i k / log beta read off the continuation:
/// c(j) int_0^1 e^{P(u)} e^{-2 pi i k u} du / Gamma(p)
///   = c(j) psi_hat(-k) prod_{m=0}^{j} (sigma - 2 pi i k / log beta - m).
/// The product vanishes exactly where 1/Gamma(p) does.
PoleInfo residue(double beta, const DigitSet& digits, int j, long k);
std::vector<PoleInfo> pole_grid(double beta, const DigitSet& digits, int j_max, long k_max);

/// zeta(-n) for a geometric base: (-1)^n n! c(n + sigma) int_0^1 e^P - [n = 0],
/// where c at a non-integer index is 0.
double special_value(double beta, const DigitSet& digits, int n);

/// Continuation to Re s > sigma - min(1, gamma) for bases b_k ~ alpha beta^k
/// with relative error O(beta^{-gamma k}). With lambda' = lambda / alpha,
///   alpha^s zeta(s) = -1/Gamma(s+1) + log(beta) / (beta^{s-sigma} - 1)
///     int_0^1 e^{P(u)} beta^{(s-sigma)u} du / Gamma(s) + h(s) / Gamma(s),
///   h(s) = sum r lambda'^{-s} Gamma(s, lambda') + int_0^1 B(t) t^{s-1-sigma+min(1,gamma)} dt.
/// The B integral runs in v = -log t on unit panels of 16 Gauss-Legendre
/// nodes out to where e^{-v (Re s - sigma + min(1,gamma))} is negligible
/// (at most v = 650). Panels are sampled once and cached, so an instance is
/// not safe to share between threads. The same holds for GeometricZeta,
/// whose lambda table grows with Re s.
class PerturbedZeta {
 public:
  PerturbedZeta(const BaseSequence& base, const DigitSet& digits, double tol = 1e-12);
  /// Requires Re s > sigma - min(1, gamma) + 0.05.
  ZetaEval eval(Complex s) const;
  double sigma() const { return sigma_; }

 private:
  void ensure_panels(double v_max) const;

  BaseSequence base_;
  DigitSet digits_;
  double beta_, sigma_, alpha_, gamma_eff_, tol_;
  ExpPTable table_;
  mutable ValueCache values_;
  mutable double v_have_ = 0;
  mutable std::vector<double> v_, wB_, dev_;
};
ZetaEval zeta_continued_perturbed(const BaseSequence& base, const DigitSet& digits, Complex s, double tol = 1e-12);

}  // namespace numsys
