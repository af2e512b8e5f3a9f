#include "numsys/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "numsys/analytic.hpp"
#include "numsys/special.hpp"

namespace numsys {

Complex FourierTable::at(long k) const {
  auto it = entries.find(k);
  if (it == entries.end()) throw DomainError("fourier table has no entry for k = " + std::to_string(k));
  return it->second;
}

double FourierTable::hermitian_defect() const {
  double worst = 0.0;
  for (const auto& [k, v] : entries) {
    if (k <= 0) continue;
    auto it = entries.find(-k);
    if (it != entries.end()) worst = std::max(worst, std::abs(it->second - std::conj(v)));
  }
  return worst;
}

Complex exp_P_complex(double beta, const DigitSet& digits, Complex w) {
  if (!(beta > 1)) throw DomainError("exp_P_complex: beta must exceed 1");
  const double lb = std::log(beta);
  if (std::abs(w.imag()) * lb >= std::numbers::pi / 2) throw DomainError("exp_P_complex: outside the strip");
  const auto& d = digits.values_double();
  const double card = static_cast<double>(d.size());
  const double dmin = d.size() > 1 ? d[1] : 1.0;
  const double dmax = digits.max_double();
  auto E = [&](Complex z) {
    Complex s = 0.0;
    for (double v : d) s += std::exp(-v * z);
    return s;
  };
  Complex prod = std::exp(w * std::log(card));
  // Upward factors tend to 1 once every nonzero digit term is below 1e-17.
  for (int k = 0;; ++k) {
    const Complex z = std::exp((static_cast<double>(k) + w) * lb);
    if (z.real() * dmin > 40.0) break;
    prod *= E(z);
    if (k > 4000) throw ComputeError("exp_P_complex: upward product did not settle");
  }
  // Downward factors are 1 - O(|z|).
  for (int k = -1;; --k) {
    const Complex z = std::exp((static_cast<double>(k) + w) * lb);
    if (std::abs(z) * dmax < 1e-18) break;
    prod *= E(z) / card;
  }
  return prod;
}

Complex psi_hat(double beta, const DigitSet& digits, long k, double tol) {
  if (!(tol > 0)) throw DomainError("psi_hat: tol must be positive");
  if (!(beta > 1)) throw DomainError("psi_hat: beta must exceed 1");
  const double lb = std::log(beta);
  const double sigma = log_card(beta, digits);
  const double two_pi_k = 2.0 * std::numbers::pi * static_cast<double>(k);
  const Complex gamma_arg(1.0 + sigma, two_pi_k / lb);

  if (k == 0) {
    ExpPTable table(beta, digits);
    return checked(table.integrate(0.0, tol / 10).value * rgamma(gamma_arg), "psi_hat");
  }

  const double h = std::numbers::pi / (2.0 * lb);
  // Close enough to the strip edge that e^{2 pi |k| (h - y)} stays near e^3,
  // far enough that the integrand stays O(1) and smooth.
  const double gap = std::min(0.1 * h, 3.0 / std::abs(two_pi_k));
  const double y = (k > 0 ? 1.0 : -1.0) * (h - gap);
  // psi_hat = scale * int_0^1 e^{P(u + iy)} e^{2 pi i k u} du.
  // Both factors overflow separately for large |k|; their product does not.
  const Complex scale = std::exp(-lgamma_complex(gamma_arg) - two_pi_k * y);
  const double int_tol = std::max(tol / (10.0 * std::abs(scale)), 1e-14);
  auto f = [&](double u) {
    return exp_P_complex(beta, digits, Complex(u, y)) * std::polar(1.0, two_pi_k * u);
  };
  const QuadratureResult q = gl_integrate(f, 0.0, 1.0, int_tol, 8192);
  return checked(q.value * scale, "psi_hat");
}

FourierTable fourier_table(double beta, const DigitSet& digits, long K, double tol) {
  if (K < 0) throw DomainError("fourier_table: K must be >= 0");
  FourierTable t;
  t.beta = beta;
  t.digits = digits.to_string();
  t.tol = tol;
  for (long k = -K; k <= K; ++k) t.entries[k] = psi_hat(beta, digits, k, tol);
  return t;
}

ResumValue resum(double x, const FourierTable& table, long K) {
  if (K < 0) throw DomainError("resum: K must be >= 0");
  Complex s = table.at(0);
  for (long k = 1; k <= K; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) * x;
    s += table.at(k) * std::polar(1.0, a) + table.at(-k) * std::polar(1.0, -a);
  }
  return {s.real(), s.imag()};
}

}  // namespace numsys
