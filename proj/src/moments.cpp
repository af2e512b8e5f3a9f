#include "numsys/moments.hpp"

#include <algorithm>
#include <cmath>

#include "numsys/counting.hpp"
#include "numsys/fourier.hpp"
#include "numsys/kernels.hpp"

namespace numsys {

namespace {

// lambda and r(lambda) for 0 < lambda <= X, as doubles.
struct Weighted {
  std::vector<double> log_lambda, r;
};

Weighted weighted_table(const BaseSequence& base, const DigitSet& digits, double X) {
  if (!digits.is_integer() || !base.integer_valued())
    throw DomainError("moments: integer digits and integer base terms required");
  if (X > 5e7) throw DomainError("moments: threshold above 5e7 (table budget)");
  const RepCountTable t = rep_counts_integer(base, digits, static_cast<std::int64_t>(std::floor(X)));
  Weighted w;
  for (std::int64_t n = 1; n <= t.upper(); ++n) {
    const double r = t.at_double(n);
    if (r == 0.0) continue;
    w.log_lambda.push_back(std::log(static_cast<double>(n)));
    w.r.push_back(r);
  }
  return w;
}

double power_sum(const Weighted& w, double exponent) {
  return kernels::exp_sum(w.r, w.log_lambda, Complex(-exponent, 0.0)).real();
}

double threshold(const BaseSequence& base, double x, int n) {
  return std::pow(base.beta(), x) * base.term_double(static_cast<std::size_t>(n));
}

// Periodic piecewise-linear interpolation of a profile on i / N.
double interp(const std::vector<double>& v, double x) {
  const std::size_t N = v.size();
  const double u = (x - std::floor(x)) * static_cast<double>(N);
  const std::size_t i = static_cast<std::size_t>(u) % N;
  const double f = u - std::floor(u);
  return (1.0 - f) * v[i] + f * v[(i + 1) % N];
}

}  // namespace

double moment_lhs(const BaseSequence& base, const DigitSet& digits, double k, double x, int n) {
  if (!(k > 0)) throw DomainError("moment_lhs: k must be positive");
  if (n < 0) throw DomainError("moment_lhs: n must be >= 0");
  const double beta = base.beta();
  const double sigma = log_card(beta, digits);
  const double card = static_cast<double>(digits.cardinality());
  const double X = threshold(base, x, n);
  const Weighted w = weighted_table(base, digits, X);
  const double bn = base.term_double(static_cast<std::size_t>(n));
  const double norm = std::pow(card, std::log(bn) / std::log(beta) - n) / std::pow(X, k);
  return norm * power_sum(w, k - sigma);
}

double moment_rhs(double beta, const DigitSet& digits, double k, double x, const DensityProfile& profile) {
  if (!(k > 0)) throw DomainError("moment_rhs: k must be positive");
  const std::size_t N = profile.estimates.size();
  if (N < 256) throw DomainError("moment_rhs: profile needs at least 256 points");
  const std::vector<double> v = profile.values();
  const double card = static_cast<double>(digits.cardinality());
  const double a = k * std::log(beta);
  const double h = 1.0 / static_cast<double>(N);
  // Exact integral of e^{a t} times the linear interpolant over one cell
  // of width h, split into left and right node weights.
  double wl, wr;
  if (std::abs(a * h) < 1e-6) {
    wl = h * (0.5 + a * h / 6.0);
    wr = h * (0.5 + a * h / 3.0);
  } else {
    const double e = std::exp(a * h);
    wl = (e - 1.0 - a * h) / (a * a * h);
    wr = (a * h * e - e + 1.0) / (a * a * h);
  }
  double integral = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double w0 = static_cast<double>(j) * h;
    const double left = interp(v, x + w0), right = interp(v, x + w0 + h);
    integral += std::exp(a * w0) * (wl * left + wr * right);
  }
  const double coeff = std::log(std::pow(beta, k) / card) / std::expm1(a);
  return interp(v, x) - coeff * integral;
}

MomentReport moment_report(const BaseSequence& base, const DigitSet& digits, double k, double x,
                           const std::vector<int>& depths, const DensityProfile& profile) {
  MomentReport m;
  m.k = k;
  m.x = x;
  m.depths = depths;
  m.rhs_value = moment_rhs(base.beta(), digits, k, x, profile);
  for (int n : depths) {
    const double l = moment_lhs(base, digits, k, x, n);
    m.lhs_values.push_back(l);
    m.relative_gaps.push_back(std::abs(l - m.rhs_value) / std::abs(m.rhs_value));
    if (n < 4) m.pre_asymptotic = true;
  }
  const std::size_t G = m.relative_gaps.size();
  m.converging = G >= 3 && m.relative_gaps[G - 1] <= m.relative_gaps[G - 2] &&
                 m.relative_gaps[G - 2] <= m.relative_gaps[G - 3];
  return m;
}

LogAverage log_average(const BaseSequence& base, const DigitSet& digits, double x, int n, double psi_mean) {
  if (n < 1) throw DomainError("log_average: n must be >= 1");
  const double beta = base.beta();
  const double sigma = log_card(beta, digits);
  const double card = static_cast<double>(digits.cardinality());
  LogAverage a;
  a.n = n;
  const Weighted w = weighted_table(base, digits, threshold(base, x, n));
  a.lhs = power_sum(w, -sigma) / std::log(card);
  for (int h = 0; h < n; ++h) {
    const double lb = std::log(base.term_double(static_cast<std::size_t>(h))) / std::log(beta);
    a.rhs += std::pow(card, h - lb);
  }
  a.rhs *= psi_mean;
  return a;
}

ChowSlatteryReport chow_slattery_report(const std::string& kind, int n_max) {
  if (n_max < 8) throw DomainError("chow_slattery_report: n_max must be >= 8");
  BaseSequence base;
  if (kind == "fibonacci") base = BaseSequence::fibonacci();
  else if (kind == "lucas") base = BaseSequence::lucas();
  else if (kind.rfind("tau-floor:", 0) == 0) base = BaseSequence::parse(kind, std::nullopt);
  else throw DomainError("chow_slattery_report: kind must be fibonacci, lucas or tau-floor:<tau>");
  const DigitSet digits = parse_digit_set("0,1");

  ChowSlatteryReport rep;
  rep.kind = kind;
  rep.beta = base.beta();
  rep.c = *base.alpha();
  rep.sigma = log_card(rep.beta, digits);
  rep.psi_mean = psi_hat(rep.beta, digits, 0).real();
  rep.constant = rep.sigma / std::pow(rep.c, rep.sigma) * rep.psi_mean;

  // One table at the largest threshold serves every row.
  const double X = base.term_double(static_cast<std::size_t>(n_max));
  if (X > 5e7) throw DomainError("chow_slattery_report: b_{n_max} above 5e7 (table budget)");
  const RepCountTable t = rep_counts_integer(base, digits, static_cast<std::int64_t>(X));
  const double card = 2.0;
  double prev_gap = 0.0, lhs_sum = 0.0, rhs_sum = 0.0;
  std::int64_t lam = 0;
  for (int n = 1; n <= n_max; ++n) {
    const double bn = base.term_double(static_cast<std::size_t>(n));
    for (; lam + 1 <= static_cast<std::int64_t>(bn); ++lam) {
      const double r = t.at_double(lam + 1);
      if (r != 0.0) lhs_sum += r * std::pow(static_cast<double>(lam + 1), -rep.sigma);
    }
    const double lb = std::log(base.term_double(static_cast<std::size_t>(n - 1))) / std::log(rep.beta);
    rhs_sum += std::pow(card, (n - 1) - lb);
    ChowSlatteryRow row;
    row.n = n;
    row.threshold = bn;
    row.log_avg.n = n;
    row.log_avg.lhs = lhs_sum / std::log(card);
    row.log_avg.rhs = rhs_sum * rep.psi_mean;
    row.gap = row.log_avg.lhs - row.log_avg.rhs;
    row.gap_step = n > 1 ? row.gap - prev_gap : 0.0;
    row.normalized = lhs_sum / std::log(bn);
    prev_gap = row.gap;
    if (n >= 2) rep.rows.push_back(row);
  }

  const DensityProfile profile = density_profile(base, digits, 512, n_max - 2);
  std::vector<int> depths;
  for (int n = n_max - 4; n <= n_max; ++n) depths.push_back(n);
  rep.moment_k1 = moment_report(base, digits, 1.0, 0.0, depths, profile);
  rep.moment_k2 = moment_report(base, digits, 2.0, 0.0, depths, profile);
  return rep;
}

}  // namespace numsys
