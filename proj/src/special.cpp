#include "numsys/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "numsys/kernels.hpp"

namespace numsys {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(Complex s) {
  return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::nearbyint(s.real());
}

// sin(pi s) with the real part reduced mod 2 first, so that s close to an
// integer keeps its relative accuracy.
// sin(pi s), reduced to |Re| <= 1/2 so that it stays accurate near every integer.
Complex sin_pi(Complex s) {
  const double n = std::nearbyint(s.real());
  const double r = s.real() - n;
  const Complex v = std::sin(Complex(kPi * r, kPi * s.imag()));
  return std::fmod(n, 2.0) == 0.0 ? v : -v;
}

double dist_to_pole(Complex s) {
  if (s.real() > 0.5) return std::abs(s);  // only 0 is near
  const double n = std::min(0.0, std::nearbyint(s.real()));
  return std::abs(s - Complex(n, 0.0));
}

}  // namespace

Complex lgamma_complex(Complex z) {
  z -= 1.0;
  Complex a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

Complex gamma_complex(Complex s) {
  if (!is_finite(s)) throw DomainError("gamma_complex: non-finite argument");
  if (is_pole(s)) throw PoleError("gamma_complex: pole at s = " + std::to_string(s.real()));
  if (s.real() < 0.5) return kPi / (sin_pi(s) * gamma_complex(1.0 - s));
  return std::exp(lgamma_complex(s));
}

Complex rgamma(Complex s) {
  if (!is_finite(s)) throw DomainError("rgamma: non-finite argument");
  if (is_pole(s)) return 0.0;
  if (s.real() < 0.5) return sin_pi(s) * std::exp(lgamma_complex(1.0 - s)) / kPi;
  return std::exp(-lgamma_complex(s));
}

namespace {

// w^s e^{-w} sum_n w^n / Gamma(s+n+1), i.e. the regularized lower function.
Complex regularized_lower_series(Complex s, double w) {
  Complex term = rgamma(s + 1.0);
  Complex sum = term;
  // rgamma(s+1) vanishes at s = -1, -2, ...; restart from the first nonzero
  // term, which is reached at n = -s - 1.
  long n = 0;
  if (term == 0.0) {
    const long first = static_cast<long>(-s.real()) - 1;
    term = std::pow(w, static_cast<double>(first + 1)) * rgamma(s + static_cast<double>(first + 2));
    n = first + 1;
    sum = term;
  }
  for (long it = 0; it < 100000; ++it) {
    ++n;
    term *= w / (s + static_cast<double>(n));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && static_cast<double>(n) > w + std::abs(s)) break;
  }
  return std::exp(s * std::log(w) - w) * sum;
}

// Lentz continued fraction for Gamma(s, w) (modified NR form).
Complex upper_cf(Complex s, double w) {
  constexpr double tiny = 1e-300;
  Complex b = w + 1.0 - s;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i < 20000; ++i) {
    const Complex an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return std::exp(s * std::log(w) - w) * h;
  }
  throw ComputeError("upper_incomplete_gamma: continued fraction did not converge (s = " +
                     std::to_string(s.real()) + "+" + std::to_string(s.imag()) + "i, w = " + std::to_string(w) +
                     ")");
}

// int_0^inf exp(-w e^v) (w e^v)^s dv by panels of unit width.
Complex upper_quadrature(Complex s, double w) {
  const auto& rule = gauss_legendre(32);
  const double v_end = std::log(std::max(800.0, 2.0 * std::abs(s) + 60.0) / w);
  const double logw = std::log(w);
  Complex total = 0.0;
  for (double a = 0.0; a < v_end; a += 1.0) {
    const double b = std::min(a + 1.0, v_end);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double v = mid + half * rule.nodes[i];
      const double u = w * std::exp(v);
      total += half * rule.weights[i] * std::exp(s * (logw + v) - u);
    }
  }
  return total;
}

}  // namespace

Complex lower_incomplete_gamma(Complex s, double w) {
  if (!(w >= 0)) throw DomainError("lower_incomplete_gamma: w must be >= 0");
  if (w == 0) return 0.0;
  return checked(gamma_complex(s) * regularized_lower_series(s, w), "lower_incomplete_gamma");
}

Complex upper_incomplete_gamma(Complex s, double w) {
  if (!is_finite(s) || !std::isfinite(w)) throw DomainError("upper_incomplete_gamma: non-finite argument");
  if (w < 0) throw DomainError("upper_incomplete_gamma: w must be >= 0");
  if (w == 0) return gamma_complex(s);
  const bool near_pole = dist_to_pole(s) < 1e-3;
  if (w >= std::abs(s) + 2.0) return checked(upper_cf(s, w), "upper_incomplete_gamma");
  if (!near_pole) {
    const Complex g = gamma_complex(s);
    const Complex q = 1.0 - regularized_lower_series(s, w);
    const Complex v = g * q;
    if (std::abs(q) > 1e-4) return checked(v, "upper_incomplete_gamma");
  }
  if (w >= 0.5) return checked(upper_cf(s, w), "upper_incomplete_gamma");
  return checked(upper_quadrature(s, w), "upper_incomplete_gamma");
}

Complex gamma_q(Complex s, double w) {
  if (!(w > 0)) throw DomainError("gamma_q: w must be positive");
  if (is_pole(s)) return 0.0;  // Gamma(s, w) stays finite, 1/Gamma(s) vanishes
  if (w >= std::abs(s) + 2.0) return checked(upper_cf(s, w) * rgamma(s), "gamma_q");
  return checked(1.0 - regularized_lower_series(s, w), "gamma_q");
}

// ------------------------------------------------------------- quadrature

const GaussLegendreRule& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussLegendreRule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  if (n == 0) throw DomainError("gauss_legendre: n must be positive");

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

QuadratureResult gl_integrate(const std::function<Complex(double)>& f, double a, double b, double tol,
                              std::size_t max_nodes) {
  if (!(tol > 0)) throw DomainError("gl_integrate: tol must be positive");
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  auto apply = [&](std::size_t n) {
    const auto& r = gauss_legendre(n);
    Complex s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return checked(s * half, "gl_integrate");
  };
  Complex prev = apply(8);
  for (std::size_t n = 16; n <= max_nodes; n *= 2) {
    const Complex cur = apply(n);
    const double diff = std::abs(cur - prev);
    if (diff < tol) return {cur, n, diff};
    prev = cur;
  }
  throw ComputeError("gl_integrate: no convergence with " + std::to_string(max_nodes) + " nodes");
}

// -------------------------------------------------------------------- dft

Complex dft_coeff(std::span<const double> samples, long k) {
  if (samples.empty()) throw DomainError("dft: empty input");
  const std::size_t n = samples.size();
  std::vector<double> idx(n);
  for (std::size_t j = 0; j < n; ++j) idx[j] = static_cast<double>(j);
  // Reduce k mod N so the phase stays small.
  const long nn = static_cast<long>(n);
  const long kr = ((k % nn) + nn) % nn;
  const Complex s(0.0, 2 * kPi * static_cast<double>(kr) / static_cast<double>(n));
  return kernels::exp_sum(samples, idx, s) / static_cast<double>(n);
}

std::vector<Complex> dft(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("dft: empty input");
  std::vector<Complex> out(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) out[k] = dft_coeff(samples, static_cast<long>(k));
  return out;
}

}  // namespace numsys
