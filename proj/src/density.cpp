#include "numsys/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "numsys/counting.hpp"

namespace numsys {

std::vector<double> DensityProfile::values() const {
  std::vector<double> v;
  v.reserve(estimates.size());
  for (const auto& e : estimates) v.push_back(e.value);
  return v;
}

namespace {

double card_of(const DigitSet& d) { return static_cast<double>(d.cardinality()); }

double kappa_prime(const BaseSequence& base, const DigitSet& digits) { return 0.9 * kappa(base.beta(), digits); }

}  // namespace

double psi_scaling_value(const BaseSequence& base, const DigitSet& digits, double x, int n) {
  if (n < 0) throw DomainError("psi_scaling: n must be >= 0");
  const Rational y = base.term(static_cast<std::size_t>(n)) * exact_rational(std::pow(base.beta(), x));
  const BigInt S = counting_fn(base, digits, y).value;
  return S.get_d() / std::pow(card_of(digits), static_cast<double>(n) + x);
}

double calibrate_error_constant(const BaseSequence& base, const DigitSet& digits, std::span<const double> xs, int n,
                                int window) {
  if (n < 2) return 0.0;
  const double kp = kappa_prime(base, digits);
  const double card = card_of(digits);
  double C = 0.0;
  for (double x : xs) {
    const double ref = psi_scaling_value(base, digits, x, n);
    for (int m = std::max(1, n - window); m < n; ++m) {
      const double diff = std::abs(psi_scaling_value(base, digits, x, m) - ref);
      C = std::max(C, diff / std::pow(card, -kp * m));
    }
  }
  return C;
}

DensityEstimate psi_scaling(const BaseSequence& base, const DigitSet& digits, double x, int n,
                            std::optional<double> C) {
  if (n < 1) throw DomainError("psi_scaling: n must be >= 1");
  DensityEstimate e;
  e.x = x;
  e.depth = n;
  e.value = psi_scaling_value(base, digits, x, n);
  const double c = C ? *C : calibrate_error_constant(base, digits, std::span<const double>(&x, 1), n);
  e.error_bound = c * std::pow(card_of(digits), -kappa_prime(base, digits) * n);
  return e;
}

DensityEstimate psi_series(const BaseSequence& base, const DigitSet& digits, double x, int depth) {
  if (!base.is_geometric()) throw DomainError("psi_series: geometric base required");
  if (depth < 0) throw DomainError("psi_series: depth must be >= 0");
  const Rational beta = *base.beta_exact();
  const double card = card_of(digits);
  Rational y = exact_rational(std::pow(base.beta(), x));
  auto S = [&](const Rational& t) { return counting_fn(base, digits, t).value; };

  double value = S(y).get_d() / std::pow(card, x);
  for (int h = 0; h < depth; ++h) {
    const BigInt Sy = S(y);
    BigInt window = 0;
    for (const auto& d : digits.values()) window += Sy - S(y - d / beta);
    value -= window.get_d() / std::pow(card, h + x + 1.0);
    y *= beta;
  }
  DensityEstimate e;
  e.x = x;
  e.depth = depth;
  e.value = value;
  if (depth >= 2) {
    const double C = calibrate_error_constant(base, digits, std::span<const double>(&x, 1), depth);
    e.error_bound = C * std::pow(card, -kappa_prime(base, digits) * depth);
  }
  return e;
}

DensityProfile density_profile(const BaseSequence& base, const DigitSet& digits, std::size_t points, int depth) {
  if (points == 0) throw DomainError("density_profile: need at least one point");
  DensityProfile p;
  p.beta = base.beta();
  p.digits = digits.to_string();
  p.base = base.describe();
  for (std::size_t i = 0; i < points; ++i) p.grid.push_back(static_cast<double>(i) / static_cast<double>(points));

  std::vector<double> probe;
  const std::size_t stride = std::max<std::size_t>(1, points / 8);
  for (std::size_t i = 0; i < points; i += stride) probe.push_back(p.grid[i]);
  p.error_constant = calibrate_error_constant(base, digits, probe, depth);

  for (double x : p.grid) p.estimates.push_back(psi_scaling(base, digits, x, depth, p.error_constant));
  return p;
}

// ------------------------------------------------------------- two-sided

SandwichReport sandwich_check(const BaseSequence& base, const DigitSet& digits, std::span<const double> xs,
                              int depth) {
  const auto ib = integer_beta(base);
  if (!ib) throw DomainError("sandwich_check: integer geometric base required");
  SandwichReport rep;
  rep.depth = depth;
  rep.mu = mu(*ib, digits);
  const double beta = static_cast<double>(*ib);
  const double card = card_of(digits);
  const double m = static_cast<double>(rep.mu);
  if (rep.mu >= static_cast<std::int64_t>(digits.cardinality()))
    throw DomainError("sandwich_check: mu must be smaller than |d|");
  double inner = 0.0;
  for (auto d : digits.integer_values())
    if (d != 0) inner += 1.0 + static_cast<double>(d / *ib);
  rep.constant = m / (card - m) * inner;

  rep.worst_lower = rep.worst_upper = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double x : xs) {
    if (!(x >= 1)) {
      ++rep.skipped;
      continue;
    }
    SandwichSample s;
    s.x = x;
    const Rational xq = exact_rational(x);
    const double w = std::log(x) / std::log(beta);
    const int whole = static_cast<int>(std::floor(w));
    const double f = w - whole;
    s.S = counting_fn(base, digits, xq).value.get_d();
    // Psi estimate at frac(w) with threshold x beta^{depth - whole}, exactly.
    Rational scale = 1;
    const Rational bq(*ib);
    for (int i = whole; i < depth; ++i) scale *= bq;
    for (int i = depth; i < whole; ++i) scale /= bq;
    s.psi_est = counting_fn(base, digits, xq * scale).value.get_d() / std::pow(card, depth + f);
    const double tail = rep.constant * std::pow(m / card, depth + f);
    s.psi_low = s.psi_est - tail;
    const double xs_sigma = std::pow(card, w);
    const double rhs = rep.constant * std::pow(m, w);
    s.lower_margin = s.S - xs_sigma * s.psi_est;
    s.upper_margin = rhs - (s.S - xs_sigma * s.psi_low);
    // Rounding allowance: the quantities are O(x^sigma) doubles.
    const double tol = 1e-12 * std::max(s.S, rhs);
    ok = ok && s.lower_margin >= -tol && s.upper_margin >= -tol;
    rep.worst_lower = std::min(rep.worst_lower, s.lower_margin);
    rep.worst_upper = std::min(rep.worst_upper, s.upper_margin);
    rep.samples.push_back(s);
  }
  rep.holds = ok;
  return rep;
}

SandwichReport sandwich_check(const BaseSequence& base, const DigitSet& digits, double X, std::size_t samples,
                              int depth, std::uint64_t seed) {
  if (!(X >= 1)) throw DomainError("sandwich_check: X must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, std::log(X));
  std::vector<double> xs;
  for (std::size_t i = 0; i < samples; ++i) xs.push_back(std::exp(u(rng)));
  return sandwich_check(base, digits, std::span<const double>(xs), depth);
}

// ------------------------------------------------------------- regularity

namespace {

void lip_tv(std::span<const double> grid, std::span<const double> v, double eta, double* lip, double* tv) {
  const std::size_t n = v.size();
  double q = 0.0, t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += std::abs(v[(i + 1) % n] - v[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = std::abs(grid[j] - grid[i]);
      d = std::min(d, 1.0 - d);
      q = std::max(q, std::abs(v[j] - v[i]) / std::pow(d, eta));
    }
  }
  *lip = q;
  *tv = t;
}

double safe_ratio(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  return a / b;
}

}  // namespace

RegularityReport regularity_probe(const DensityProfile& profile, const DigitSet& digits, std::optional<double> eta) {
  if (profile.estimates.size() < 4) throw DomainError("regularity_probe: profile too small");
  RegularityReport r;
  r.eta = eta ? *eta : 0.9 * kappa(profile.beta, digits) * log_card(profile.beta, digits);
  const std::vector<double> v = profile.values();
  lip_tv(profile.grid, v, r.eta, &r.lipschitz_quotient, &r.total_variation);
  std::vector<double> cg, cv;
  for (std::size_t i = 0; i < v.size(); i += 2) {
    cg.push_back(profile.grid[i]);
    cv.push_back(v[i]);
  }
  lip_tv(cg, cv, r.eta, &r.coarse_lipschitz_quotient, &r.coarse_total_variation);
  r.lipschitz_ratio = safe_ratio(r.lipschitz_quotient, r.coarse_lipschitz_quotient);
  r.variation_ratio = safe_ratio(r.total_variation, r.coarse_total_variation);
  r.stable = std::isfinite(r.lipschitz_quotient) && std::isfinite(r.total_variation) && r.lipschitz_ratio < 2.0 &&
             r.variation_ratio < 2.0;
  return r;
}

}  // namespace numsys
