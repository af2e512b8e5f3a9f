#pragma once

// Moments of r: the normalized k-th moment sums, their limits in terms of
// Psi, the logarithmic average, and the Chow-Slattery reports for
// Fibonacci, Lucas and floor(tau^m) partitions.

#include <string>
#include <vector>

#include "numsys/core.hpp"
#include "numsys/density.hpp"

namespace numsys {

/// |d|^{log_beta b_n - n} (beta^x b_n)^{-k} sum_{0 < lambda <= beta^x b_n} r(lambda) lambda^{k - sigma},
/// summed exactly over a representation table (integer systems).
double moment_lhs(const BaseSequence& base, const DigitSet& digits, double k, double x, int n);

/// Psi(x) - log(beta^k / |d|) / (beta^k - 1) int_0^1 Psi(x + w) beta^{k w} dw
/// from a profile of at least 256 points. Psi is the periodic piecewise-linear
/// interpolant of the profile and the integral is taken exactly for it
/// (a trapezoid rule whose weights absorb beta^{k w}).
double moment_rhs(double beta, const DigitSet& digits, double k, double x, const DensityProfile& profile);

struct MomentReport {
  double k = 0;
  double x = 0;
  std::vector<int> depths;
  std::vector<double> lhs_values;
  double rhs_value = 0;
  std::vector<double> relative_gaps;  // |lhs - rhs| / |rhs|
  bool pre_asymptotic = false;        // some depth below 4
  bool converging = false;            // gaps non-increasing over the last three depths
};
MomentReport moment_report(const BaseSequence& base, const DigitSet& digits, double k, double x,
                           const std::vector<int>& depths, const DensityProfile& profile);

struct LogAverage {
  int n = 0;
  double lhs = 0;  // (1 / log|d|) sum_{0 < lambda <= beta^x b_n} r(lambda) lambda^{-sigma}
  double rhs = 0;  // sum_{0 <= h < n} |d|^{h - log_beta b_h} int_0^1 Psi
};
/// psi_mean is int_0^1 Psi (psi_hat(0)).
LogAverage log_average(const BaseSequence& base, const DigitSet& digits, double x, int n, double psi_mean);

struct ChowSlatteryRow {
  int n = 0;
  double threshold = 0;  // b_n
  LogAverage log_avg;
  double gap = 0;         // lhs - rhs
  double gap_step = 0;    // gap(n) - gap(n - 1)
  double normalized = 0;  // sum_{lambda <= b_n} r lambda^{-sigma} / log b_n
};

struct ChowSlatteryReport {
  std::string kind;
  double beta = 0;
  double c = 0;  // b_n ~ c beta^n
  double sigma = 0;
  double psi_mean = 0;
  double constant = 0;  // (sigma / c^sigma) int_0^1 Psi, the limit of `normalized`
  std::vector<ChowSlatteryRow> rows;
  MomentReport moment_k1, moment_k2;
};
/// kind is "fibonacci", "lucas" or "tau-floor:<tau>"; digits {0, 1}.
/// Rows cover n = 2..n_max; the k = 1, 2 moment tables use the last five
/// depths and a 512-point profile of depth n_max - 2.
ChowSlatteryReport chow_slattery_report(const std::string& kind, int n_max);

}  // namespace numsys
