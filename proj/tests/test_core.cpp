#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "numsys/core.hpp"

using namespace numsys;

namespace {

// Direct term-by-term feasibility sum for kappa.
double kappa_sum_direct(double beta, double maxd, double u) {
  double s = 0;
  for (int k = 1; k < 4000; ++k) s += std::pow(beta, -std::floor(k / u)) * maxd;
  return s;
}

}  // namespace

TEST_CASE("digit sets validate and cache metadata") {
  const DigitSet b = parse_digit_set("0,1");
  CHECK(b.cardinality() == 2);
  CHECK(b.max_digit() == 1);
  const DigitSet d = parse_digit_set("5,0,1");
  CHECK(d.cardinality() == 3);
  CHECK(d.gcd_if_integer() == 1);
  CHECK(d.min_nonzero() == 1);
  CHECK(d.max_double() == 5.0);
  CHECK(parse_digit_set("0,2,4").gcd_if_integer() == 2);
  CHECK_FALSE(parse_digit_set("0,1/2").is_integer());
  CHECK_THROWS_AS(parse_digit_set("1,2"), DomainError);
  CHECK_THROWS_AS(parse_digit_set("0"), DomainError);
  CHECK_THROWS_AS(parse_digit_set("0,-1"), DomainError);
  CHECK(parse_digit_set("0,1,1").cardinality() == 2);
}

TEST_CASE("kappa") {
  CHECK(kappa(2, parse_digit_set("0,1")) == doctest::Approx(1.0).epsilon(1e-9));
  // (3, {0,1,5}): the sum at u = 1/2 is exactly 5 (1/3 + 1/3 + 1/9 + 1/9 + ...) / 5 = 1.
  const double k = kappa(3, parse_digit_set("0,1,5"));
  CHECK(k == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(kappa_sum_direct(3, 5, 0.5) <= 1.0 + 1e-12);
  CHECK(kappa_sum_direct(3, 5, 0.5 + 1e-6) > 1.0);
  CHECK(kappa_sum(3, parse_digit_set("0,1,5"), 0.55) == doctest::Approx(kappa_sum_direct(3, 5, 0.55)).epsilon(1e-12));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const int beta = 2 + static_cast<int>(rng() % 3);
    const int m1 = 1 + static_cast<int>(rng() % 9), m2 = m1 + 1 + static_cast<int>(rng() % 5);
    const double k1 = kappa(beta, parse_digit_set("0," + std::to_string(m1)));
    const double k2 = kappa(beta, parse_digit_set("0," + std::to_string(m2)));
    CHECK(k1 <= 1.0);
    CHECK(k2 <= k1 + 1e-9);
  }
}

TEST_CASE("mu") {
  CHECK(mu(3, parse_digit_set("0,1,3")) == 2);
  CHECK(mu(2, parse_digit_set("0,1")) == 1);
  CHECK(mu(3, parse_digit_set("0,1,5")) == 1);
  CHECK_THROWS_AS(mu(3, parse_digit_set("0,3,6")), DomainError);
  CHECK_THROWS_AS(mu(3, parse_digit_set("0,1/2")), DomainError);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int beta = 2 + static_cast<int>(rng() % 4);
    std::string text = "0";
    for (int d = 1; d <= 9; ++d)
      if (rng() % 3 == 0) text += "," + std::to_string(d);
    if (text == "0") text += ",1";
    const DigitSet ds = parse_digit_set(text);
    if (ds.gcd_if_integer() != 1) continue;
    const double card = static_cast<double>(ds.cardinality());
    const auto m = mu(beta, ds);
    CHECK(static_cast<double>(m) >= std::max(1.0, card / beta));
    CHECK(m <= static_cast<std::int64_t>(ds.cardinality()) - 1);
  }
}

TEST_CASE("base sequences") {
  const auto fib = BaseSequence::fibonacci().terms(6);
  CHECK(fib == std::vector<Rational>{1, 2, 3, 5, 8, 13});
  CHECK(BaseSequence::lucas().terms(5) == std::vector<Rational>{2, 1, 3, 4, 7});
  CHECK(BaseSequence::tau_floor(Rational(9, 5)).terms(4) == std::vector<Rational>{1, 3, 5, 10});
  CHECK(BaseSequence::central_binomial().terms(5) == std::vector<Rational>{1, 2, 6, 20, 70});
  CHECK(BaseSequence::geometric(3).terms(4) == std::vector<Rational>{1, 3, 9, 27});

  const double phi = (1 + std::sqrt(5.0)) / 2;
  const BaseSequence F = BaseSequence::fibonacci();
  CHECK(*F.alpha() == doctest::Approx(phi * phi / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(*BaseSequence::lucas().alpha() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(BaseSequence::central_binomial().beta() == 4.0);
  CHECK_FALSE(BaseSequence::central_binomial().alpha().has_value());

  // Ratio probe: |b_{k+1}/b_k - phi| shrinks monotonically after burn-in.
  double prev = 1.0;
  for (std::size_t k = 5; k <= 60; ++k) {
    const double err = std::abs(to_double(F.term(k + 1) / F.term(k)) - phi);
    if (k >= 40) CHECK(err < 1e-10);
    if (k <= 30) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("scaled deviations match exact terms") {
  for (const BaseSequence& b : {BaseSequence::fibonacci(), BaseSequence::lucas(),
                                BaseSequence::tau_floor(Rational(9, 5))}) {
    const double a = *b.alpha(), beta = b.beta();
    for (std::size_t k = 0; k < 12; ++k)
      CHECK(b.scaled_deviation(k) ==
            doctest::Approx(b.term_double(k) / a - std::pow(beta, static_cast<double>(k))).epsilon(1e-9));
  }
}

TEST_CASE("parse and table files") {
  CHECK(BaseSequence::parse("geometric", Rational(3)).is_geometric());
  CHECK(BaseSequence::parse("tau-floor:1.8", std::nullopt).beta() == doctest::Approx(1.8));
  CHECK_THROWS_AS(BaseSequence::parse("geometric", std::nullopt), DomainError);
  CHECK_THROWS_AS(BaseSequence::parse("nonsense", std::nullopt), DomainError);
  CHECK(parse_rational("9/5") == Rational(9, 5));
  CHECK(parse_rational("1.25") == Rational(5, 4));

  const auto dir = std::filesystem::temp_directory_path();
  const auto good = dir / "numsys_table_ok.txt";
  {
    std::ofstream os(good);
    os << "beta=2\nalpha=1\ngamma=1\n1\n2\n4\n8\n";
  }
  const BaseSequence t = BaseSequence::load_table(good);
  CHECK(t.beta() == 2.0);
  CHECK(t.terms(4) == std::vector<Rational>{1, 2, 4, 8});
  CHECK(t.max_terms() == 4u);
  const auto bad = dir / "numsys_table_bad.txt";
  {
    std::ofstream os(bad);
    os << "1\n2\n";
  }
  CHECK_THROWS_AS(BaseSequence::load_table(bad), DomainError);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}

TEST_CASE("system params") {
  const SystemParams p = system_params(BaseSequence::geometric(3), parse_digit_set("0,1,3"));
  CHECK(p.mu == 2);
  CHECK(p.log_card == doctest::Approx(1.0));
  CHECK(p.kappa <= 1.0);
  CHECK_FALSE(system_params(BaseSequence::fibonacci(), parse_digit_set("0,1")).mu.has_value());
}
