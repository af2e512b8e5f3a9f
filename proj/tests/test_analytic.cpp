#include <doctest.h>

#include <cmath>
#include <numbers>

#include "numsys/analytic.hpp"

using namespace numsys;

namespace {

// (-1)^l B_l / l! for l <= 12.
double bernoulli_ratio(int l) {
  static const double B[] = {1, -0.5, 1.0 / 6, 0, -1.0 / 30, 0, 1.0 / 42, 0, -1.0 / 30, 0, 5.0 / 66, 0, -691.0 / 2730};
  return (l % 2 ? -1 : 1) * B[l] / std::tgamma(l + 1.0);
}

}  // namespace

TEST_CASE("L and its coefficients") {
  const DigitSet bin = parse_digit_set("0,1");
  CHECK(L(bin, 0) == doctest::Approx(std::log(2.0)));
  CHECK(L(bin, 1.7) == doctest::Approx(std::log1p(std::exp(-1.7))));
  CHECK(L(parse_digit_set("0,1,5"), 10) == doctest::Approx(std::log(1 + std::exp(-10.0) + std::exp(-50.0))).epsilon(1e-15));
  const PowerSeries c = L_coeffs(bin, 6);
  CHECK(c[0] == doctest::Approx(std::log(2.0)));
  CHECK(c[1] == -0.5);
  CHECK((*c.exact)[1] == Rational(-1, 2));
  CHECK(L_coeffs(parse_digit_set("0,1,2"), 3)[1] == doctest::Approx(-1.0));
  const DigitSet d = parse_digit_set("0,1/2,7");
  CHECK(L_coeffs(d, 2)[1] == doctest::Approx(-7.5 / 3));
  // Second coefficient is half the digit variance.
  CHECK(L_coeffs(d, 2)[2] == doctest::Approx(0.5 * ((0.25 + 49) / 3 - std::pow(7.5 / 3, 2))));
}

TEST_CASE("P") {
  for (int beta : {2, 3, 5}) {
    std::string text = "0";
    for (int d = 1; d < beta; ++d) text += "," + std::to_string(d);
    for (double w : {0.0, 0.21, 0.5, 0.93}) CHECK(std::abs(P(beta, parse_digit_set(text), w)) < 1e-10);
  }
  const DigitSet d = parse_digit_set("0,1,5");
  // High-precision direct summation oracle.
  CHECK(P(3, d, 0) == doctest::Approx(-0.389559783903346589).epsilon(1e-13));
  CHECK(P(3, d, 0.37) == doctest::Approx(-0.389041134016692458).epsilon(1e-13));
  for (double w : {0.1, 0.6, -2.3}) CHECK(std::abs(P(3, d, w + 1) - P(3, d, w)) < 2e-14);
  // Smoothness: centered second differences on a 2^-10 grid stay uniformly small.
  const double h = 1.0 / 1024;
  double worst = 0;
  for (int i = 0; i < 1024; i += 8) {
    const double w = i * h;
    worst = std::max(worst, std::abs(P(3, d, w + h) - 2 * P(3, d, w) + P(3, d, w - h)) / (h * h));
  }
  CHECK(worst < 10);
}

TEST_CASE("c coefficients") {
  for (int beta : {2, 3, 5}) {
    std::string text = "0";
    for (int d = 1; d < beta; ++d) text += "," + std::to_string(d);
    const DigitSet ds = parse_digit_set(text);
    const PowerSeries c = c_coeffs(beta, ds, 12);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c[2] == doctest::Approx(1.0 / 12).epsilon(1e-14));
    for (int l = 0; l <= 12; ++l) {
      const double want = bernoulli_ratio(l);
      if (want == 0) CHECK(std::abs(c[l]) < 1e-15);
      else CHECK(c[l] == doctest::Approx(want).epsilon(1e-10));
    }
    const PowerSeries ex = c_coeffs_exact(Rational(beta), ds, 12);
    CHECK((*ex.exact)[2] == Rational(1, 12));
  }
  for (const auto& [beta, text] : {std::pair{3.0, "0,1,5"}, std::pair{2.0, "0,1,5"}, std::pair{1.8, "0,1"}}) {
    const DigitSet ds = parse_digit_set(text);
    const PowerSeries c = c_coeffs(beta, ds, 8);
    for (std::size_t m = 0; m <= 8; ++m)
      CHECK(c_coeff_partition_sum(beta, ds, m) == doctest::Approx(c[m]).epsilon(1e-12).scale(1e-300));
  }
}

TEST_CASE("radius") {
  const RadiusInfo b = radius(2, parse_digit_set("0,1"));
  CHECK(b.rho == 0);
  CHECK(b.sigma_est == doctest::Approx(2 * std::numbers::pi).epsilon(0.05));
  const RadiusInfo f = radius(3, parse_digit_set("0,1,2"));
  CHECK(f.rho == 0);
  CHECK(f.sigma_est == doctest::Approx(2 * std::numbers::pi).epsilon(0.05));
  for (const auto& [beta, text] : {std::pair{3.0, "0,1,5"}, std::pair{2.0, "0,1,5"}}) {
    const RadiusInfo r = radius(beta, parse_digit_set(text));
    CHECK(std::pow(beta, -r.rho) < r.sigma_est);
    if (r.rho >= 1) CHECK(r.sigma_est <= std::pow(beta, -r.rho + 1) * 2.0);
  }
  CHECK(radius(2, parse_digit_set("0,1,5")).rho == 1);
  CHECK_THROWS_AS(radius(2, parse_digit_set("0,1"), 10), DomainError);
}

TEST_CASE("Z") {
  const BaseSequence bin = BaseSequence::geometric(2);
  const DigitSet d2 = parse_digit_set("0,1");
  for (double t : {0.05, 0.5, 2.0}) CHECK(Z(bin, d2, t) == doctest::Approx(1 / -std::expm1(-t)).epsilon(1e-13));
  CHECK(Z(bin, d2, 60) == doctest::Approx(1.0).epsilon(1e-15));
  const BaseSequence g3 = BaseSequence::geometric(3);
  const DigitSet d = parse_digit_set("0,1,5");
  CHECK(Z(g3, d, 1.0) == doctest::Approx(1.44323406581198929).epsilon(1e-14));
  CHECK(Z(g3, d, 0.1) == doctest::Approx(7.46446459832920655).epsilon(1e-13));
  CHECK(std::log(Z(g3, d, 0.1)) == doctest::Approx(log_Z(g3, d, 0.1)).epsilon(1e-14));
  CHECK_THROWS_AS(Z(g3, d, 0.0), DomainError);
}

TEST_CASE("small-t expansion") {
  const BaseSequence g3 = BaseSequence::geometric(3);
  const DigitSet d = parse_digit_set("0,1,5");
  const PowerSeries c = c_coeffs(3, d, 12);
  const int M = 6;
  for (double t : {0.5, 0.2, 0.05}) {
    double part = 0;
    for (int m = 0; m <= M; ++m) part += c[m] * std::pow(t, m);
    const double lhs = Z(g3, d, t) - std::exp(P(3, d, std::log(t) / std::log(3.0))) * part / t;
    CHECK(std::abs(lhs) <= 2 * std::abs(c[M + 1]) * std::pow(t, M));
  }
}

TEST_CASE("Euler-Maclaurin identity") {
  const auto b = euler_maclaurin_identity_check(2, parse_digit_set("0,1"), 0.5);
  CHECK(std::abs(b.diff) < 1e-10);
  CHECK(std::abs(euler_maclaurin_identity_check(3, parse_digit_set("0,1,5"), 0.1).diff) < 1e-10);
  CHECK(std::abs(euler_maclaurin_identity_check(3, parse_digit_set("0,1,5"), 1.0).diff) < 1e-10);
  CHECK(std::abs(euler_maclaurin_identity_check(1.8, parse_digit_set("0,1/2,3"), 1e-5).diff) < 1e-10);
}

TEST_CASE("B") {
  // Geometric bases: B(t) = e^{P} (c(1) + c(2) t + ...) exactly.
  const BaseSequence g3 = BaseSequence::geometric(3);
  const DigitSet d = parse_digit_set("0,1,5");
  const PowerSeries c = c_coeffs(3, d, 30);
  for (double t : {0.3, 0.01, 1e-6, std::exp(-300.0)}) {
    double s = 0;
    for (int m = 1; m <= 30; ++m) s += c[m] * std::pow(t, m - 1);
    CHECK(B_fn(g3, d, t) == doctest::Approx(std::exp(P(3, d, std::log(t) / std::log(3.0))) * s).epsilon(1e-10));
  }
  CHECK(B_fn(BaseSequence::geometric(2), parse_digit_set("0,1"), 1e-12) == doctest::Approx(0.5).epsilon(1e-9));

  // Fibonacci and Lucas: bounded on (0, 1].
  const DigitSet bin = parse_digit_set("0,1");
  for (const BaseSequence& b : {BaseSequence::fibonacci(), BaseSequence::lucas()}) {
    double sup = 0;
    for (int j = 0; j <= 900; j += 3) sup = std::max(sup, std::abs(B_fn(b, bin, std::ldexp(1.0, -j))));
    CHECK(sup < 2);
  }
  // floor(tau^{k+1}): the deviations b_k / alpha - tau^k do not decay, so with
  // gamma = 1 the bound only holds up to a factor log(1 / t).
  const BaseSequence tb = BaseSequence::tau_floor(Rational(9, 5));
  for (int j = 1; j <= 600; j += 7) {
    const double t = std::ldexp(1.0, -j);
    CHECK(std::abs(B_fn(tb, bin, t)) <= 1.0 + 0.25 * j);
  }
  CHECK_THROWS_AS(B_fn(BaseSequence::central_binomial(), bin, 0.5), DomainError);
}

TEST_CASE("e^P table") {
  const ExpPTable t(3, parse_digit_set("0,1,5"));
  const auto r = t.integrate(0.0, 1e-14);
  CHECK(r.value.real() == doctest::Approx(0.677541099242209).epsilon(1e-13));
  CHECK(t.value_at(0.37) == doctest::Approx(std::exp(-0.389041134016692458)).epsilon(1e-13));
}
