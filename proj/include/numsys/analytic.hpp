#pragma once

// Generating-function toolkit: L_d(y) = log sum_d e^{-delta y}, its Maclaurin
// coefficients, the period-1 function P, the coefficients c(l) of
// prod_{k>=1} |d| / sum_d e^{-delta beta^{-k} t}, their radius, the product
// Z(e^{-t}) and the perturbation remainder B(t).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "numsys/core.hpp"
#include "numsys/special.hpp"
#include "numsys/types.hpp"

namespace numsys {

struct PowerSeries {
  std::vector<double> coeffs;                 // index = degree
  std::optional<std::vector<Rational>> exact;  // same, when known exactly (entry 0 may be a placeholder)
  std::size_t truncation_degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double operator[](std::size_t i) const { return coeffs.at(i); }
};

struct RadiusInfo {
  double sigma_est = 0;  // +inf when the coefficient tail vanishes
  int rho = 0;
};

/// L_d(y) for y >= 0.
double L(const DigitSet& digits, double y);
/// L_d(y) - log|d|, accurate for small y.
double L_shifted(const DigitSet& digits, double y);

/// Maclaurin coefficients of L_d up to degree M. Entry 0 is log|d| (exact
/// entry 0 is set to 0); entries h >= 1 are exact rationals.
PowerSeries L_coeffs(const DigitSet& digits, std::size_t M);

/// P_{beta,d}(w), from the two-sided series with adaptive truncation.
double P(double beta, const DigitSet& digits, double w, double tol = 1e-15);

/// c(0..M) in double precision via exp(sum_h t^h [y^h]L / (1 - beta^h)).
PowerSeries c_coeffs(double beta, const DigitSet& digits, std::size_t M);
/// Same with exact rational arithmetic (rational beta).
PowerSeries c_coeffs_exact(const Rational& beta, const DigitSet& digits, std::size_t M);
/// c(m) as the explicit sum over partitions of m; an independent check of
/// c_coeffs for small m (the number of partitions grows quickly).
double c_coeff_partition_sum(double beta, const DigitSet& digits, std::size_t m);

/// sigma_est = 1 / max_{M/2 <= l <= M} |c(l)|^{1/l} and rho = least h >= 0
/// with beta^{-h} < sigma_est / 2. Requires M >= 20.
RadiusInfo radius(double beta, const DigitSet& digits, std::size_t M = 40);

/// Z(e^{-t}) = prod_{k<K} sum_d e^{-t delta b_k}. K = 0 picks K so that the
/// next factor is within 1e-16 of 1.
double Z(const BaseSequence& base, const DigitSet& digits, double t, std::size_t K = 0);
/// log Z(e^{-t}); avoids overflow for small t.
double log_Z(const BaseSequence& base, const DigitSet& digits, double t, std::size_t K = 0);

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
  double diff = 0;
};
/// Both sides of sum_{k>=0} L(beta^k t) = -(log_beta t) log|d| + P(log_beta t)
///   + sum_{k>=1} (log|d| - L(beta^{-k} t)).
IdentityCheck euler_maclaurin_identity_check(double beta, const DigitSet& digits, double t);

/// B(t) = (Z(e^{-t/alpha}) - e^{P(log_beta t)} t^{-sigma}) t^{sigma - min(1, gamma)}
/// for 0 < t <= 1, evaluated without cancellation from the deviations
/// b_k / alpha - beta^k. Needs declared alpha and gamma.
double B_fn(const BaseSequence& base, const DigitSet& digits, double t);
/// Same with precomputed deviations (at least B_fn_terms(t) of them), for
/// callers sampling many t.
double B_fn(const BaseSequence& base, const DigitSet& digits, double t, std::span<const double> deviations);
std::size_t B_fn_terms(const BaseSequence& base, const DigitSet& digits, double t);

/// e^{P(u)} on Gauss-Legendre nodes of [0, 1] at 16, 32, ..., 512 points.
/// Computing P is the expensive part of every integral against e^P, so one
/// table serves all of them.
class ExpPTable {
 public:
  ExpPTable(double beta, const DigitSet& digits);
  double beta() const { return beta_; }
  /// int_0^1 e^{P(u)} e^{-z u} du with node doubling until successive levels
  /// agree to tol.
  QuadratureResult integrate(Complex z, double tol) const;
  /// int_0^1 e^{P(u)} beta^{a u} du.
  QuadratureResult integrate_beta_power(Complex a, double tol) const {
    return integrate(-a * std::log(beta_), tol);
  }
  double value_at(double u) const;

 private:
  struct Level {
    std::vector<double> nodes;    // on [0, 1]
    std::vector<double> weights;  // times e^{P(node)}
  };
  double beta_;
  DigitSet digits_;
  std::vector<Level> levels_;
};

}  // namespace numsys
