#include <doctest.h>

#include <cmath>

#include "numsys/counting.hpp"
#include "numsys/density.hpp"

using namespace numsys;

namespace {

const BaseSequence kBin = BaseSequence::geometric(2);
const BaseSequence k3 = BaseSequence::geometric(3);

}  // namespace

TEST_CASE("scaling estimator") {
  const DigitSet bin = parse_digit_set("0,1");
  const DensityEstimate e = psi_scaling(kBin, bin, 0.3, 20);
  CHECK(std::abs(e.value - 1.0) < std::ldexp(1.0, -20));
  CHECK(e.value > 0);

  const DigitSet d = parse_digit_set("0,1,5");
  double prev_step = 1;
  for (int n : {6, 8, 10, 12}) {
    const double step = std::abs(psi_scaling_value(k3, d, 0, n + 2) - psi_scaling_value(k3, d, 0, n));
    CHECK(step < prev_step);
    // Geometric rate no slower than |d|^{-kappa'} per depth.
    CHECK(step <= 0.05 * std::pow(3.0, -0.45 * n));
    prev_step = step;
  }
  CHECK(psi_scaling(BaseSequence::fibonacci(), bin, 0, 25).value > 0);
  CHECK_THROWS_AS(psi_scaling(k3, d, 0, 0), DomainError);
}

TEST_CASE("series estimator equals the scaling estimator") {
  const DigitSet bin = parse_digit_set("0,1");
  for (double x : {0.0, 0.25, 0.7})
    CHECK(psi_series(kBin, bin, x, 15).value == doctest::Approx(psi_scaling_value(kBin, bin, x, 15)).epsilon(1e-14));
  const DigitSet d = parse_digit_set("0,1,5");
  CHECK(std::abs(psi_series(k3, d, 0.5, 10).value - psi_scaling_value(k3, d, 0.5, 10)) < 1e-12);
  const double x = 0.4;
  const double direct = counting_fn(k3, d, std::pow(3.0, x)).value.get_d() / std::pow(3.0, x);
  CHECK(psi_series(k3, d, x, 0).value == doctest::Approx(direct).epsilon(1e-15));
  CHECK_THROWS_AS(psi_series(BaseSequence::fibonacci(), bin, 0, 3), DomainError);
}

TEST_CASE("profile periodicity and positivity") {
  const DigitSet d = parse_digit_set("0,1,5");
  const DensityProfile p = density_profile(k3, d, 64, 10);
  CHECK(p.grid.size() == 64);
  for (std::size_t i = 1; i < p.grid.size(); ++i) CHECK(p.grid[i] - p.grid[i - 1] == doctest::Approx(1.0 / 64));
  for (const auto& e : p.estimates) {
    CHECK(e.value > 0);
    const double shifted = psi_scaling_value(k3, d, e.x + 1, 10);
    CHECK(std::abs(e.value - shifted) <= 2 * e.error_bound);
  }
}

TEST_CASE("two-sided bound") {
  const auto b = sandwich_check(kBin, parse_digit_set("0,1"), 1e4, 50, 14);
  CHECK(b.holds);
  CHECK(b.worst_lower >= 0);
  const auto t = sandwich_check(k3, parse_digit_set("0,1,3"), 1e3, 50, 14);
  CHECK(t.holds);
  CHECK(t.constant == doctest::Approx(6.0));
  const std::vector<double> xs{0.5, 2, 50};
  const auto s = sandwich_check(k3, parse_digit_set("0,1,3"), std::span<const double>(xs), 12);
  CHECK(s.skipped == 1);
  CHECK(s.samples.size() == 2);
  CHECK_THROWS_AS(sandwich_check(BaseSequence::fibonacci(), parse_digit_set("0,1"), 1e3), DomainError);
}

TEST_CASE("regularity probes") {
  const DigitSet bin = parse_digit_set("0,1");
  const RegularityReport rb = regularity_probe(density_profile(kBin, bin, 64, 30), bin);
  CHECK(rb.total_variation < 1e-7);
  const DigitSet d = parse_digit_set("0,1,5");
  const RegularityReport r = regularity_probe(density_profile(k3, d, 512, 12), d);
  CHECK(std::isfinite(r.lipschitz_quotient));
  CHECK(r.stable);
  const DigitSet d013 = parse_digit_set("0,1,3");
  const double eta = 1.0 - std::log(2.0) / std::log(3.0);
  const RegularityReport r3 = regularity_probe(density_profile(k3, d013, 256, 12), d013, eta);
  CHECK(std::isfinite(r3.lipschitz_quotient));
  CHECK(r3.eta == doctest::Approx(eta));
}

TEST_CASE("perturbed base converges to the geometric density") {
  // b_k = floor(tau^{k+1}) = alpha tau^k + O(1) with alpha = tau, so
  // S(b_n) / (b_n / alpha)^sigma approaches Psi(log_tau(b_n / alpha)).
  const BaseSequence tb = BaseSequence::tau_floor(Rational(9, 5));
  const BaseSequence geo = BaseSequence::geometric(Rational(9, 5));
  const DigitSet d = parse_digit_set("0,1");
  const double beta = 1.8, alpha = *tb.alpha(), sigma = log_card(beta, d);
  double prev = 1;
  for (int n : {10, 15, 20, 25}) {
    const double bn = tb.term_double(n) / alpha;
    const double lhs = counting_fn(tb, d, tb.term(n)).value.get_d() / std::pow(bn, sigma);
    const double w = std::log(bn) / std::log(beta);
    const double diff = std::abs(lhs - psi_scaling_value(geo, d, w - std::floor(w), 32));
    CHECK(diff < prev);
    prev = diff;
  }
  CHECK(prev < 1e-4);
}
