#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace numsys {

using BigInt = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition or malformed input; the CLI maps this to exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A computation could not finish (budget, convergence, quadrature).
class ComputeError : public Error {
 public:
  using Error::Error;
};

// Evaluation at (or too close to) a pole.
class PoleError : public ComputeError {
 public:
  using ComputeError::ComputeError;
};

inline bool is_finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// ComplexValue boundary check: NaN/Inf never leave or enter the public API.
inline Complex checked(const Complex& z, const char* what) {
  if (!is_finite(z)) throw ComputeError(std::string(what) + ": non-finite complex value");
  return z;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(const BigInt& z) { return z.get_d(); }

// Exact rational from a double (every finite double is a dyadic rational).
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("exact_rational: non-finite value");
  Rational q(x);
  q.canonicalize();
  return q;
}

}  // namespace numsys
