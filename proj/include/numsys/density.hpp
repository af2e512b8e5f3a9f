#pragma once

// The relative density function Psi: scaling-limit and series estimators,
// depth-error calibration, the two-sided bound for integer systems and
// empirical regularity probes.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "numsys/core.hpp"

namespace numsys {

struct DensityEstimate {
  double x = 0;
  double value = 0;
  int depth = 0;
  double error_bound = 0;
};

struct DensityProfile {
  double beta = 0;
  std::string digits;
  std::string base;
  std::vector<double> grid;  // i / N on [0, 1)
  std::vector<DensityEstimate> estimates;
  double error_constant = 0;  // C in C |d|^{-0.9 kappa n}

  std::vector<double> values() const;
};

/// |d|^{-n-x} S(b_n beta^x). The threshold is the exact rational
/// b_n * fl(beta^x); for geometric bases b_n beta^x = beta^n fl(beta^x).
double psi_scaling_value(const BaseSequence& base, const DigitSet& digits, double x, int n);

/// C = max over x in xs and n - window <= m < n of
/// |est(m) - est(n)| / |d|^{-kappa' m}, kappa' = 0.9 kappa.
double calibrate_error_constant(const BaseSequence& base, const DigitSet& digits, std::span<const double> xs, int n,
                                int window = 6);

/// psi_scaling_value with error_bound = C |d|^{-kappa' n}; C is calibrated
/// at this x when not supplied.
DensityEstimate psi_scaling(const BaseSequence& base, const DigitSet& digits, double x, int n,
                            std::optional<double> C = std::nullopt);

/// Partial series |d|^{-x} S(beta^x) - |d|^{-1} sum_{h<depth} |d|^{-h-x}
/// sum_d (S(beta^{h+x}) - S(beta^{h+x} - delta/beta)), geometric bases only.
/// Thresholds are exact rationals sharing the factor fl(beta^x), so the sum
/// telescopes to psi_scaling_value(x, depth) exactly.
DensityEstimate psi_series(const BaseSequence& base, const DigitSet& digits, double x, int depth);

/// Profile on x = i / points, i < points, with one shared error constant.
DensityProfile density_profile(const BaseSequence& base, const DigitSet& digits, std::size_t points, int depth);

struct SandwichSample {
  double x = 0;
  double S = 0;
  double psi_est = 0;  // depth-n estimate at frac(log_beta x), an upper bound for Psi
  double psi_low = 0;  // psi_est minus the rigorous tail bound
  double lower_margin = 0;  // S - x^sigma psi_est  (>= 0 proves the left inequality)
  double upper_margin = 0;  // C_s x^{log_beta mu} - (S - x^sigma psi_low)
};

struct SandwichReport {
  double constant = 0;  // mu / (|d| - mu) * sum_{delta != 0} (1 + floor(delta / beta))
  std::int64_t mu = 0;
  int depth = 0;
  std::vector<SandwichSample> samples;
  double worst_lower = 0;
  double worst_upper = 0;
  std::size_t skipped = 0;  // samples with x < 1
  bool holds = false;
};

/// Two-sided bound 0 <= S(x) - x^sigma Psi(log_beta x) <= C_s x^{log_beta mu}
/// at the given x values for an integer geometric system with gcd(d) = 1.
/// The depth-n estimate never undershoots Psi; its overshoot is bounded by
/// C_s (mu/|d|)^{n + frac}, which follows from r(n) <= mu n^{log_beta mu}.
SandwichReport sandwich_check(const BaseSequence& base, const DigitSet& digits, std::span<const double> xs,
                              int depth = 14);
/// Same at `samples` log-uniform points in [1, X] from a fixed seed.
SandwichReport sandwich_check(const BaseSequence& base, const DigitSet& digits, double X, std::size_t samples = 50,
                              int depth = 14, std::uint64_t seed = 1);

struct RegularityReport {
  double eta = 0;
  double lipschitz_quotient = 0;  // max |dPsi| / |dx|^eta over all pairs (circular distance)
  double total_variation = 0;
  double coarse_lipschitz_quotient = 0;  // same on every other grid point
  double coarse_total_variation = 0;
  double lipschitz_ratio = 0;  // fine / coarse
  double variation_ratio = 0;
  bool stable = false;  // both ratios finite and < 2
};
/// eta defaults to 0.9 kappa log_beta|d|.
RegularityReport regularity_probe(const DensityProfile& profile, const DigitSet& digits,
                                  std::optional<double> eta = std::nullopt);

}  // namespace numsys
