#include "numsys/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "numsys/counting.hpp"
#include "numsys/kernels.hpp"
#include "numsys/special.hpp"

namespace numsys {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleGuard = 1e-6;

Complex cexpm1(Complex z) {
  if (std::abs(z) < 1e-5) return z * (1.0 + z * (0.5 + z / 6.0));
  return std::exp(z) - 1.0;
}

// log|Gamma(s)|, any s off the poles.
double log_abs_gamma(Complex s) {
  if (s.real() >= 0.5) return lgamma_complex(s).real();
  // Reflection: |Gamma(s)| = pi / (|sin(pi s)| |Gamma(1 - s)|).
  return std::log(kPi) - std::log(std::abs(std::sin(kPi * s))) - lgamma_complex(1.0 - s).real();
}

// Smallest w >= 40 with |Q(s, w)| ~ e^{-w} w^{Re s - 1} / |Gamma(s)| below e^{-40}.
double q_cutoff(Complex s) {
  const double lg = log_abs_gamma(s);
  double w = 40.0;
  while ((s.real() - 1.0) * std::log(w) - w - lg > -40.0 && w < 1e6) w *= 1.1;
  return w;
}

std::optional<int> integer_sigma(double sigma) {
  const double r = std::round(sigma);
  if (std::abs(sigma - r) < 1e-12) return static_cast<int>(r);
  return std::nullopt;
}

// Non-positive integer n with s == -n exactly, if any.
std::optional<int> nonpositive_integer(Complex s) {
  if (s.imag() != 0.0 || s.real() > 0.0 || std::floor(s.real()) != s.real()) return std::nullopt;
  return static_cast<int>(-s.real());
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Pole check against sigma - j + 2 pi i m / log beta. The k = 0 locations
// that are non-positive integers are removable (1/Gamma vanishes there).
void guard_poles(Complex s, double sigma, double beta, bool all_j) {
  const double lb = std::log(beta);
  const double m = std::round(s.imag() * lb / (2.0 * kPi));
  const double jr = std::round(sigma - s.real());
  if (!all_j && jr != 0.0) return;
  if (jr < 0.0) return;
  const Complex p(sigma - jr, 2.0 * kPi * m / lb);
  if (std::abs(s - p) >= kPoleGuard) return;
  if (m == 0.0 && integer_sigma(p.real()) && p.real() <= 0.0) return;
  throw PoleError("zeta: s is within 1e-6 of a pole; use residue() there");
}

}  // namespace

const char* method_name(ZetaMethod m) {
  switch (m) {
    case ZetaMethod::direct: return "direct";
    case ZetaMethod::continued_geometric: return "continued_geometric";
    case ZetaMethod::continued_perturbed: return "continued_perturbed";
  }
  return "?";
}

void ValueCache::ensure(double limit) {
  if (limit <= have_) return;
  const auto vals = rep_values_up_to(base_, digits_, exact_rational(limit));
  lambda_.clear();
  r_.clear();
  for (const auto& v : vals) {
    lambda_.push_back(to_double(v.value));
    r_.push_back(to_double(v.count));
  }
  have_ = limit;
}

// --------------------------------------------------------------- abscissa

AbscissaInfo abscissa(const BaseSequence& base, const DigitSet& digits, int H) {
  if (H < 1) throw DomainError("abscissa: H must be >= 1");
  AbscissaInfo a;
  const double beta = base.beta();
  a.sigma_c = log_card(beta, digits);
  const double card = static_cast<double>(digits.cardinality());
  std::size_t n = static_cast<std::size_t>(H) + 1;
  if (auto mt = base.max_terms()) n = std::min(n, *mt);
  const auto terms = base.terms(n);
  double first = 0.0;
  for (std::size_t h = 0; h < terms.size(); ++h) {
    const double lb = std::log(to_double(terms[h])) / std::log(beta);
    const double t = std::pow(card, static_cast<double>(h) - lb);
    if (h == 0) first = t;
    a.partial_sum += t;
    a.last_term = t;
  }
  // Terms that stay comparable to the first never let the sum settle.
  a.boundary_divergent = a.last_term > 1e-3 * first;
  return a;
}

// ----------------------------------------------------------------- direct

DirectZeta::DirectZeta(const BaseSequence& base, const DigitSet& digits, double X, long fourier_K)
    : beta_(base.beta()), sigma_(log_card(base.beta(), digits)), X_(X), alpha_(base.alpha()) {
  if (!(X >= 2)) throw DomainError("zeta_direct: X must be >= 2");
  if (digits.is_integer() && base.integer_valued()) {
    const RepCountTable t = rep_counts_integer(base, digits, static_cast<std::int64_t>(std::floor(X)));
    for (std::int64_t n = 1; n <= t.upper(); ++n) {
      const double r = t.at_double(n);
      if (r == 0.0) continue;
      lambda_.push_back(static_cast<double>(n));
      r_.push_back(r);
    }
  } else {
    for (const auto& v : rep_values_up_to(base, digits, exact_rational(X))) {
      lambda_.push_back(to_double(v.value));
      r_.push_back(to_double(v.count));
    }
  }
  double acc = 1.0;
  for (std::size_t i = 0; i < lambda_.size(); ++i) {
    log_lambda_.push_back(std::log(lambda_[i]));
    acc += r_[i];
    S_.push_back(acc);
  }
  if (alpha_ && fourier_K >= 0) fourier_ = fourier_table(beta_, digits, fourier_K, 1e-12);
}

Complex DirectZeta::corrected(Complex s, std::size_t count, double Y, double SY) const {
  Complex sum = kernels::exp_sum(std::span<const double>(r_.data(), count),
                                 std::span<const double>(log_lambda_.data(), count), s);
  if (!fourier_) return sum;
  const double lY = std::log(Y), la = std::log(*alpha_), lb = std::log(beta_);
  Complex tail = -std::exp(-s * lY) * SY;
  Complex acc = 0.0;
  for (const auto& [k, c] : fourier_->entries) {
    const Complex z(sigma_, 2.0 * kPi * static_cast<double>(k) / lb);
    acc += c * std::exp(-z * la + (z - s) * lY) / (s - z);
  }
  return sum + tail + s * acc;
}

ZetaEval DirectZeta::eval(Complex s) const {
  if (!(s.real() >= sigma_ + 0.2 - 1e-12))
    throw DomainError("zeta_direct: requires Re s >= log_beta|d| + 0.2");
  ZetaEval e;
  e.s = s;
  e.method = ZetaMethod::direct;
  const std::size_t n = lambda_.size();
  e.truncations.lambda_cut = n ? lambda_.back() : 0.0;
  const double SX = n ? S_.back() : 1.0;
  e.value = corrected(s, n, X_, SX);
  if (fourier_) {
    const double Y = X_ / (beta_ * beta_);
    const std::size_t m = static_cast<std::size_t>(std::upper_bound(lambda_.begin(), lambda_.end(), Y) - lambda_.begin());
    const double SY = m ? S_[m - 1] : 1.0;
    e.est_error = std::abs(e.value - corrected(s, m, Y, SY));
  } else {
    const double C = 2.0 * SX / std::pow(X_, sigma_);
    e.est_error = C * std::pow(X_, sigma_ - s.real()) * (std::abs(s) / (s.real() - sigma_) + 1.0);
  }
  checked(e.value, "zeta_direct");
  return e;
}

ZetaEval zeta_direct(const BaseSequence& base, const DigitSet& digits, Complex s, double X) {
  if (!(s.real() >= log_card(base.beta(), digits) + 0.2 - 1e-12))
    throw DomainError("zeta_direct: requires Re s >= log_beta|d| + 0.2");
  return DirectZeta(base, digits, X).eval(s);
}

// ------------------------------------------------------ geometric bases

GeometricZeta::GeometricZeta(const BaseSequence& base, const DigitSet& digits, std::optional<int> c_shift, double tol)
    : beta_(base.beta()),
      sigma_(log_card(base.beta(), digits)),
      tol_(tol),
      table_(base.beta(), digits),
      values_(base, digits) {
  if (!base.is_geometric()) throw DomainError("zeta_continued_geometric: geometric base required");
  if (!(tol > 0)) throw DomainError("zeta_continued_geometric: tol must be positive");
  sigma_int_ = integer_sigma(sigma_);
  rho_ = radius(beta_, digits).rho;
  c_ = c_shift ? *c_shift : rho_;
  if (c_ < rho_) throw DomainError("zeta_continued_geometric: c_shift must be >= rho = " + std::to_string(rho_));
  c_coeffs_ = c_coeffs(beta_, digits, 160);
}

ZetaEval GeometricZeta::eval(Complex s) const {
  checked(s, "zeta_continued_geometric");
  guard_poles(s, sigma_, beta_, true);
  const double lb = std::log(beta_);
  const double T = std::pow(beta_, -c_);
  const auto neg = nonpositive_integer(s);
  ZetaEval e;
  e.s = s;
  e.method = ZetaMethod::continued_geometric;
  e.truncations.c_shift = c_;

  // (i) incomplete-gamma lambda-sum; Q(-n, w) = 0.
  Complex lam_sum = 0.0;
  double magnitude = 0.0;  // sum of |terms|, for the rounding part of est_error
  double quad_error = 0.0;
  if (!neg) {
    const double wmax = q_cutoff(s);
    values_.ensure(wmax / T);
    const auto& lam = values_.lambda();
    const auto& r = values_.r();
    for (std::size_t i = 0; i < lam.size() && lam[i] * T <= wmax; ++i) {
      const Complex t = r[i] * std::exp(-s * std::log(lam[i])) * gamma_q(s, lam[i] * T);
      lam_sum += t;
      magnitude += std::abs(t);
      e.truncations.lambda_cut = lam[i];
    }
  }

  // (ii)
  const Complex head = -std::exp(-s * (c_ * lb)) * rgamma(s + 1.0);

  // (iii) l-sum.
  const Complex rg = rgamma(s);
  Complex ell_sum = 0.0;
  double recent[4] = {1, 1, 1, 1};
  const int ell_start = std::max(0, static_cast<int>(std::ceil(sigma_ - s.real())));
  int ell = 0;
  for (;; ++ell) {
    if (ell >= static_cast<int>(c_coeffs_.coeffs.size()))
      throw ComputeError("zeta_continued_geometric: l-sum did not converge");
    const double c = c_coeffs_[static_cast<std::size_t>(ell)];
    Complex term = 0.0;
    if (c != 0.0) {
      const Complex a = s + static_cast<double>(ell) - sigma_;
      const bool removable = neg && sigma_int_ && ell == *neg + *sigma_int_;
      const double scale = std::max(1.0, std::exp(a.real() * lb));
      Complex factor = 0.0;
      if (removable) factor = c * ((*neg % 2 ? -1.0 : 1.0) * factorial(*neg));
      else if (rg != 0.0) factor = c * std::exp(-a * (c_ * lb)) * lb / cexpm1(a * lb) * rg;
      if (factor != 0.0) {
        // The integral's error is multiplied by |factor|, up to 1/|Gamma(s)| ~ e^{pi |Im s| / 2}.
        const double amp = std::max(1.0, std::abs(factor));
        const auto I = table_.integrate(-a * lb, std::max(tol_ * 1e-2 * scale / amp, 1e-15 * scale));
        term = factor * I.value;
        quad_error += std::abs(factor) * I.est_error;
      }
    }
    ell_sum += term;
    magnitude += std::abs(term);
    recent[ell % 4] = std::abs(term);
    const double env = std::max({recent[0], recent[1], recent[2], recent[3]});
    if (ell >= ell_start + 4 && env < tol_ * 1e-2 * std::max(1.0, std::abs(ell_sum))) {
      e.est_error = 4.0 * env;
      break;
    }
  }
  e.truncations.ell_cut = ell;
  e.value = checked(lam_sum + head + ell_sum, "zeta_continued_geometric");
  magnitude += std::abs(head);
  // 1/Gamma comes from exp(lgamma), whose absolute error scales with |lgamma|;
  // that relative error lands on every term before they cancel.
  const double lg = std::abs(lgamma_complex(s.real() >= 0.5 ? s : 1.0 - s));
  const double rounding = 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, lg) * magnitude;
  e.est_error += tol_ + quad_error + rounding;
  return e;
}

ZetaEval zeta_continued_geometric(const BaseSequence& base, const DigitSet& digits, Complex s,
                                  std::optional<int> c_shift, double tol) {
  return GeometricZeta(base, digits, c_shift, tol).eval(s);
}

// --------------------------------------------------- residues and values

PoleInfo residue(double beta, const DigitSet& digits, int j, long k) {
  if (j < 0) throw DomainError("residue: j must be >= 0");
  const double sigma = log_card(beta, digits);
  const double T = 2.0 * kPi * static_cast<double>(k) / std::log(beta);
  PoleInfo p;
  p.j = j;
  p.k = k;
  p.location = Complex(sigma - j, k == 0 ? 0.0 : -T);
  const double c = c_coeffs(beta, digits, static_cast<std::size_t>(std::max(j, 1)))[static_cast<std::size_t>(j)];
  Complex prod = 1.0;
  for (int m = 0; m <= j; ++m) prod *= Complex(sigma - m, -T);
  if (c != 0.0 && prod != 0.0) p.residue = c * psi_hat(beta, digits, -k) * prod;
  p.removable_possible = std::abs(p.residue) < 1e-14;
  return p;
}

std::vector<PoleInfo> pole_grid(double beta, const DigitSet& digits, int j_max, long k_max) {
  if (j_max < 0 || k_max < 0) throw DomainError("pole_grid: j_max and k_max must be >= 0");
  const double sigma = log_card(beta, digits);
  const double lb = std::log(beta);
  const PowerSeries c = c_coeffs(beta, digits, static_cast<std::size_t>(std::max(j_max, 1)));
  std::vector<PoleInfo> out;
  for (long k = -k_max; k <= k_max; ++k) {
    const Complex ph = psi_hat(beta, digits, -k);
    const double T = 2.0 * kPi * static_cast<double>(k) / lb;
    for (int j = 0; j <= j_max; ++j) {
      PoleInfo p;
      p.j = j;
      p.k = k;
      p.location = Complex(sigma - j, k == 0 ? 0.0 : -T);
      Complex prod = 1.0;
      for (int m = 0; m <= j; ++m) prod *= Complex(sigma - m, -T);
      if (c[static_cast<std::size_t>(j)] != 0.0 && prod != 0.0) p.residue = c[static_cast<std::size_t>(j)] * ph * prod;
      p.removable_possible = std::abs(p.residue) < 1e-14;
      out.push_back(p);
    }
  }
  return out;
}

double special_value(double beta, const DigitSet& digits, int n) {
  if (n < 0) throw DomainError("special_value: n must be >= 0");
  const auto m = integer_sigma(log_card(beta, digits));
  const double head = n == 0 ? -1.0 : 0.0;
  if (!m) return head;
  const std::size_t idx = static_cast<std::size_t>(n + *m);
  const double c = c_coeffs(beta, digits, std::max<std::size_t>(idx, 1))[idx];
  const double I = ExpPTable(beta, digits).integrate(0.0, 1e-14).value.real();
  return (n % 2 ? -1.0 : 1.0) * factorial(n) * c * I + head;
}

// ------------------------------------------------------ perturbed bases

PerturbedZeta::PerturbedZeta(const BaseSequence& base, const DigitSet& digits, double tol)
    : base_(base),
      digits_(digits),
      beta_(base.beta()),
      sigma_(log_card(base.beta(), digits)),
      alpha_(base.alpha().value_or(0.0)),
      gamma_eff_(std::min(1.0, base.gamma().value_or(0.0))),
      tol_(tol),
      table_(base.beta(), digits),
      values_(base, digits) {
  if (!base.alpha() || !base.gamma()) throw DomainError("zeta_continued_perturbed: base must declare alpha and gamma");
  if (!(tol > 0)) throw DomainError("zeta_continued_perturbed: tol must be positive");
}

void PerturbedZeta::ensure_panels(double v_max) const {
  const auto& rule = gauss_legendre(16);
  const std::size_t K = B_fn_terms(base_, digits_, std::exp(-std::ceil(v_max)));
  if (dev_.size() < K) dev_ = base_.scaled_deviations(K);
  while (v_have_ < v_max) {
    const double a = v_have_;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double v = a + 0.5 * (rule.nodes[i] + 1.0);
      v_.push_back(v);
      wB_.push_back(0.5 * rule.weights[i] * B_fn(base_, digits_, std::exp(-v), dev_));
    }
    v_have_ += 1.0;
  }
}

ZetaEval PerturbedZeta::eval(Complex s) const {
  checked(s, "zeta_continued_perturbed");
  const double rate = s.real() - sigma_ + gamma_eff_;
  if (!(rate > 0.05)) throw DomainError("zeta_continued_perturbed: requires Re s > log_beta|d| - min(1, gamma) + 0.05");
  guard_poles(s, sigma_, beta_, false);
  const double lb = std::log(beta_);
  ZetaEval e;
  e.s = s;
  e.method = ZetaMethod::continued_perturbed;

  // h(s): lambda-sum over lambda' = lambda / alpha.
  Complex h = 0.0;
  const double wmax = q_cutoff(s);
  values_.ensure(wmax * alpha_);
  const auto& lam = values_.lambda();
  const auto& r = values_.r();
  for (std::size_t i = 0; i < lam.size() && lam[i] / alpha_ <= wmax; ++i) {
    const double lp = lam[i] / alpha_;
    h += r[i] * std::exp(-s * std::log(lp)) * upper_incomplete_gamma(s, lp);
    e.truncations.lambda_cut = lam[i];
  }

  // B integral in v = -log t: int_0^inf B(e^{-v}) e^{-v (s - sigma + min(1, gamma))} dv.
  // |B| grows at most like v here, so stop once (1 + v) e^{-rate v} < tol / 100.
  double v_max = 8.0;
  while ((1.0 + v_max) * std::exp(-rate * v_max) > tol_ * 1e-2 && v_max < 650.0) v_max += 8.0;
  ensure_panels(v_max);
  const std::size_t used = static_cast<std::size_t>(std::lround(v_max)) * 16;
  const Complex shift = s - sigma_ + gamma_eff_;
  h += kernels::exp_sum(std::span<const double>(wB_.data(), used), std::span<const double>(v_.data(), used), shift);
  const double B_end = std::abs(wB_[used - 1] / gauss_legendre(16).weights.back() * 2.0);
  e.est_error = (B_end + 1.0) * std::exp(-rate * v_max) / rate + tol_;

  const Complex a = s - sigma_;
  const double scale = std::max(1.0, std::exp(a.real() * lb));
  const Complex I = table_.integrate(-a * lb, tol_ * 1e-2 * scale).value;
  const Complex rg = rgamma(s);
  const Complex inner = -rgamma(s + 1.0) + lb * I / cexpm1(a * lb) * rg + h * rg;
  e.value = checked(std::exp(-s * std::log(alpha_)) * inner, "zeta_continued_perturbed");
  return e;
}

ZetaEval zeta_continued_perturbed(const BaseSequence& base, const DigitSet& digits, Complex s, double tol) {
  return PerturbedZeta(base, digits, tol).eval(s);
}

}  // namespace numsys
