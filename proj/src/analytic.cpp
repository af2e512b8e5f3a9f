#include "numsys/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numsys/kernels.hpp"

namespace numsys {

double L(const DigitSet& digits, double y) {
  if (!(y >= 0)) throw DomainError("L: y must be >= 0");
  // The 0 digit contributes the 1 inside log1p.
  double s = 0.0;
  for (double d : digits.values_double().subspan(1)) s += std::exp(-d * y);
  return std::log1p(s);
}

double L_shifted(const DigitSet& digits, double y) {
  if (!(y >= 0)) throw DomainError("L_shifted: y must be >= 0");
  if (y * digits.max_double() >= 1.0) return L(digits, y) - std::log(static_cast<double>(digits.cardinality()));
  double s = 0.0;
  for (double d : digits.values_double()) s += std::expm1(-d * y);
  return std::log1p(s / static_cast<double>(digits.cardinality()));
}

PowerSeries L_coeffs(const DigitSet& digits, std::size_t M) {
  if (M < 1) throw DomainError("L_coeffs: M must be >= 1");
  const Rational card(static_cast<long>(digits.cardinality()));
  // sum_d e^{-d y} = |d| (1 + F(y)), F_n = (-1)^n p_n / (|d| n!).
  std::vector<Rational> F(M + 1, Rational(0));
  Rational fact = 1;
  for (std::size_t n = 1; n <= M; ++n) {
    fact *= static_cast<unsigned long>(n);
    Rational p = 0;
    for (const auto& d : digits.values()) {
      Rational pw = 1;
      for (std::size_t i = 0; i < n; ++i) pw *= d;
      p += pw;
    }
    F[n] = p / (card * fact);
    if (n % 2 == 1) F[n] = -F[n];
  }
  // log(1 + F): g_n = F_n - (1/n) sum_{k<n} k g_k F_{n-k}.
  std::vector<Rational> g(M + 1, Rational(0));
  for (std::size_t n = 1; n <= M; ++n) {
    Rational acc = 0;
    for (std::size_t k = 1; k < n; ++k) acc += Rational(static_cast<long>(k)) * g[k] * F[n - k];
    g[n] = F[n] - acc / Rational(static_cast<long>(n));
  }
  PowerSeries out;
  out.coeffs.resize(M + 1);
  out.coeffs[0] = std::log(to_double(card));
  for (std::size_t n = 1; n <= M; ++n) out.coeffs[n] = to_double(g[n]);
  out.exact = std::move(g);
  return out;
}

double P(double beta, const DigitSet& digits, double w, double tol) {
  if (!(beta > 1)) throw DomainError("P: beta must exceed 1");
  if (!(tol > 0)) throw DomainError("P: tol must be positive");
  if (!std::isfinite(w)) throw DomainError("P: w must be finite");
  // Period 1; the truncation rules below assume w in [0, 1).
  w -= std::floor(w);
  const double maxd = digits.max_double();
  auto delta_L = [&](double y1, double y2) {
    if (y2 * maxd < 1.0) return L_shifted(digits, y1) - L_shifted(digits, y2);
    return L(digits, y1) - L(digits, y2);
  };
  auto term = [&](long k) {
    const double y1 = std::pow(beta, static_cast<double>(k) + w);
    return (static_cast<double>(k) + w + 0.5) * delta_L(y1, y1 * beta);
  };

  double sum = 0.0;
  // Upward: double-exponential decay; stop after three consecutive small terms.
  int small = 0;
  for (long k = 0; small < 3; ++k) {
    const double t = term(k);
    sum += t;
    small = std::abs(t) < tol / 10 ? small + 1 : 0;
    if (k > 4000) throw ComputeError("P: upward series did not settle");
  }
  // Downward: |term_k| <= |k + w + 1/2| max(d) beta^{k+1+w}; stop when the
  // geometric tail bound drops below tol/10.
  const double q = 1.0 / beta;
  const double tail_scale = maxd / ((1.0 - q) * (1.0 - q));
  for (long k = -1;; --k) {
    sum += term(k);
    const double bound = (std::abs(static_cast<double>(k) + w) + 2.0) * tail_scale *
                         std::pow(beta, static_cast<double>(k) + w);
    if (bound < tol / 10) break;
    if (k < -100000) throw ComputeError("P: downward series did not settle");
  }
  return sum + 0.5 * std::log(static_cast<double>(digits.cardinality()));
}

namespace {

// exp of a series with zero constant term: h_n = (1/n) sum_{k=1..n} k a_k h_{n-k}.
template <typename T>
std::vector<T> formal_exp(const std::vector<T>& a) {
  const std::size_t M = a.size() - 1;
  std::vector<T> h(M + 1, T(0));
  h[0] = T(1);
  for (std::size_t n = 1; n <= M; ++n) {
    T acc = T(0);
    for (std::size_t k = 1; k <= n; ++k) acc += T(static_cast<long>(k)) * a[k] * h[n - k];
    h[n] = acc / T(static_cast<long>(n));
  }
  return h;
}

}  // namespace

PowerSeries c_coeffs(double beta, const DigitSet& digits, std::size_t M) {
  if (!(beta > 1)) throw DomainError("c_coeffs: beta must exceed 1");
  PowerSeries out;
  if (M == 0) {
    out.coeffs = {1.0};
    return out;
  }
  const PowerSeries lc = L_coeffs(digits, M);
  std::vector<double> a(M + 1, 0.0);
  for (std::size_t h = 1; h <= M; ++h) a[h] = lc.coeffs[h] / -std::expm1(static_cast<double>(h) * std::log(beta));
  out.coeffs = formal_exp(a);
  return out;
}

PowerSeries c_coeffs_exact(const Rational& beta, const DigitSet& digits, std::size_t M) {
  if (beta <= 1) throw DomainError("c_coeffs_exact: beta must exceed 1");
  PowerSeries out;
  if (M == 0) {
    out.coeffs = {1.0};
    out.exact = std::vector<Rational>{Rational(1)};
    return out;
  }
  const PowerSeries lc = L_coeffs(digits, M);
  std::vector<Rational> a(M + 1, Rational(0));
  Rational bp = 1;
  for (std::size_t h = 1; h <= M; ++h) {
    bp *= beta;
    a[h] = (*lc.exact)[h] / (Rational(1) - bp);
  }
  std::vector<Rational> c = formal_exp(a);
  out.coeffs.resize(M + 1);
  for (std::size_t i = 0; i <= M; ++i) out.coeffs[i] = to_double(c[i]);
  out.exact = std::move(c);
  return out;
}

double c_coeff_partition_sum(double beta, const DigitSet& digits, std::size_t m) {
  if (m == 0) return 1.0;
  if (m > 30) throw DomainError("c_coeff_partition_sum: m too large for partition enumeration");
  const PowerSeries lc = L_coeffs(digits, m);
  std::vector<double> a(m + 1, 0.0);
  for (std::size_t h = 1; h <= m; ++h) a[h] = lc.coeffs[h] / (1.0 - std::pow(beta, static_cast<double>(h)));
  // sum over multiplicities l_1..l_m with sum h l_h = m of prod a_h^{l_h} / l_h!
  double total = 0.0;
  auto rec = [&](auto&& self, std::size_t h, std::size_t remaining, double prod) -> void {
    if (remaining == 0) {
      total += prod;
      return;
    }
    if (h > remaining) return;
    double p = prod, fact = 1.0;
    for (std::size_t l = 0; l * h <= remaining; ++l) {
      if (l > 0) {
        p *= a[h];
        fact *= static_cast<double>(l);
      }
      self(self, h + 1, remaining - l * h, p / fact);
    }
  };
  rec(rec, 1, m, 1.0);
  return total;
}

RadiusInfo radius(double beta, const DigitSet& digits, std::size_t M) {
  if (M < 20) throw DomainError("radius: M must be >= 20");
  const PowerSeries c = c_coeffs(beta, digits, M);
  double worst = 0.0;
  for (std::size_t l = M / 2; l <= M; ++l) {
    const double v = std::abs(c.coeffs[l]);
    if (v < 1e-280) continue;  // vanishing coefficients carry no radius information
    worst = std::max(worst, std::pow(v, 1.0 / static_cast<double>(l)));
  }
  RadiusInfo info;
  if (worst == 0.0) {
    info.sigma_est = std::numeric_limits<double>::infinity();
    info.rho = 0;
    return info;
  }
  info.sigma_est = 1.0 / worst;
  int h = 0;
  while (std::pow(beta, -h) >= info.sigma_est / 2) ++h;
  info.rho = h;
  return info;
}

namespace {

// Terms b_k (as doubles) until t b_k min_nonzero exceeds 40, plus one more.
std::vector<double> terms_for_t(const BaseSequence& base, const DigitSet& digits, double scaled_t) {
  const double mnz = to_double(digits.min_nonzero());
  const Rational limit = exact_rational(40.0 / (scaled_t * mnz));
  std::vector<Rational> ts = base.terms_up_to(limit);
  std::vector<double> out;
  out.reserve(ts.size() + 1);
  for (const auto& v : ts) out.push_back(to_double(v));
  if (!base.max_terms() || ts.size() < *base.max_terms()) out.push_back(base.term_double(ts.size()));
  return out;
}

}  // namespace

double log_Z(const BaseSequence& base, const DigitSet& digits, double t, std::size_t K) {
  if (!(t > 0)) throw DomainError("Z: t must be positive");
  double s = 0.0;
  if (K > 0) {
    for (const auto& b : base.terms(K)) s += L(digits, t * to_double(b));
    return s;
  }
  for (double b : terms_for_t(base, digits, t)) s += L(digits, t * b);
  return s;
}

double Z(const BaseSequence& base, const DigitSet& digits, double t, std::size_t K) {
  const double v = std::exp(log_Z(base, digits, t, K));
  if (!std::isfinite(v)) throw ComputeError("Z: product overflows double; use log_Z");
  return v;
}

namespace {

// sum_{k>=1} L_shifted(beta^{-k} t): negative, of size O(t). Summed to
// relative accuracy, since B divides it by t.
double lower_shift_sum(double beta, const DigitSet& digits, double t) {
  double s = 0.0;
  for (double y = t / beta; y > 1e-18 * t; y /= beta) s += L_shifted(digits, y);
  return s;
}

}  // namespace

IdentityCheck euler_maclaurin_identity_check(double beta, const DigitSet& digits, double t) {
  if (!(t > 0 && t <= 1)) throw DomainError("identity check: t must lie in (0, 1]");
  IdentityCheck r;
  const double mnz = to_double(digits.min_nonzero());
  for (double y = t; y * mnz < 745.0; y *= beta) r.lhs += L(digits, y);
  const double w = std::log(t) / std::log(beta);
  r.rhs = -w * std::log(static_cast<double>(digits.cardinality())) + P(beta, digits, w) -
          lower_shift_sum(beta, digits, t);
  r.diff = std::abs(r.lhs - r.rhs);
  return r;
}

namespace {

// L(y + dy) - L(y) = log1p(sum_d e^{-delta y} expm1(-delta dy) / E(y)), which
// keeps full relative accuracy when dy is tiny next to y.
double L_step(const DigitSet& digits, double y, double dy) {
  double E = 0.0, num = 0.0;
  for (double d : digits.values_double()) {
    const double e = std::exp(-d * y);
    E += e;
    num += e * std::expm1(-d * dy);
  }
  return std::log1p(num / E);
}

}  // namespace

std::size_t B_fn_terms(const BaseSequence& base, const DigitSet& digits, double t) {
  const double mnz = to_double(digits.min_nonzero());
  return static_cast<std::size_t>(std::ceil(std::log(40.0 / (t * mnz)) / std::log(base.beta()))) + 2;
}

double B_fn(const BaseSequence& base, const DigitSet& digits, double t, std::span<const double> deviations) {
  if (!(t > 0 && t <= 1)) throw DomainError("B_fn: t must lie in (0, 1]");
  if (!base.alpha() || !base.gamma()) throw DomainError("B_fn: base must declare alpha and gamma");
  const double beta = base.beta(), gamma = *base.gamma();
  const std::size_t K = B_fn_terms(base, digits, t);
  if (deviations.size() < K) throw DomainError("B_fn: too few deviations supplied");
  // log Z(e^{-t/alpha}) - (P(log_beta t) - sigma log t), split so that every
  // piece is small: factors L(t b_k / alpha) - L(t beta^k) with the exact
  // deviation b_k / alpha - beta^k, then the k < 0 tail of the geometric sum.
  double D = 0.0;
  double g = 1.0;  // beta^k
  for (std::size_t k = 0; k < K; ++k, g *= beta)
    if (deviations[k] != 0.0) D += L_step(digits, t * g, t * deviations[k]);
  D -= lower_shift_sum(beta, digits, t);
  const double w = std::log(t) / std::log(beta);
  return std::exp(P(beta, digits, w)) * std::expm1(D) / std::pow(t, std::min(1.0, gamma));
}

double B_fn(const BaseSequence& base, const DigitSet& digits, double t) {
  if (!(t > 0 && t <= 1)) throw DomainError("B_fn: t must lie in (0, 1]");
  if (!base.alpha()) throw DomainError("B_fn: base must declare alpha and gamma");
  return B_fn(base, digits, t, base.scaled_deviations(B_fn_terms(base, digits, t)));
}

// ---------------------------------------------------------------- ExpPTable

ExpPTable::ExpPTable(double beta, const DigitSet& digits) : beta_(beta), digits_(digits) {
  if (!(beta > 1)) throw DomainError("ExpPTable: beta must exceed 1");
  for (std::size_t n = 16; n <= 512; n *= 2) {
    const auto& rule = gauss_legendre(n);
    Level lv;
    lv.nodes.resize(n);
    lv.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = 0.5 * (rule.nodes[i] + 1.0);
      lv.nodes[i] = u;
      lv.weights[i] = 0.5 * rule.weights[i] * std::exp(P(beta, digits, u));
    }
    levels_.push_back(std::move(lv));
  }
}

QuadratureResult ExpPTable::integrate(Complex z, double tol) const {
  if (!(tol > 0)) throw DomainError("ExpPTable::integrate: tol must be positive");
  Complex prev = kernels::exp_sum(levels_[0].weights, levels_[0].nodes, z);
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    const Complex cur = kernels::exp_sum(levels_[i].weights, levels_[i].nodes, z);
    const double diff = std::abs(cur - prev);
    if (diff < tol) return {checked(cur, "ExpPTable::integrate"), levels_[i].nodes.size(), diff};
    prev = cur;
  }
  throw ComputeError("ExpPTable::integrate: no convergence with 512 nodes");
}

double ExpPTable::value_at(double u) const { return std::exp(P(beta_, digits_, u)); }

}  // namespace numsys
