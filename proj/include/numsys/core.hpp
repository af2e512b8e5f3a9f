#pragma once

// Digit sets, base sequences and the structural constants of a numeration
// system: the window exponent kappa and the residue multiplicity mu.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "numsys/types.hpp"

namespace numsys {

/// Finite set of distinct non-negative rationals containing 0.
class DigitSet {
 public:
  /// Validates and sorts; throws DomainError on a missing 0, a negative value
  /// or fewer than two distinct values.
  static DigitSet make(std::vector<Rational> values);

  std::span<const Rational> values() const { return values_; }
  std::span<const double> values_double() const { return doubles_; }
  std::size_t cardinality() const { return values_.size(); }
  const Rational& max_digit() const { return values_.back(); }
  const Rational& min_nonzero() const { return values_[1]; }
  double max_double() const { return doubles_.back(); }
  double sum_double() const;

  bool is_integer() const { return gcd_.has_value(); }
  /// gcd of the nonzero digits when every digit is an integer.
  std::optional<std::int64_t> gcd_if_integer() const { return gcd_; }
  /// Integer digits; throws DomainError when some digit is not an integer.
  std::vector<std::int64_t> integer_values() const;
  /// Least common multiple of the digit denominators.
  BigInt denominator_lcm() const;

  /// True for {0, 1, ..., q-1}.
  bool is_full_range() const;
  std::string to_string() const;

 private:
  std::vector<Rational> values_;
  std::vector<double> doubles_;
  std::optional<std::int64_t> gcd_;
};

DigitSet make_digit_set(std::vector<Rational> values);
/// Parses "0,1,5" (integers, decimals or p/q fractions).
DigitSet parse_digit_set(std::string_view text);
/// Parses "1.8", "9/5" or "3" into an exact rational.
Rational parse_rational(std::string_view text);

enum class BaseKind { geometric, fibonacci, lucas, tau_floor, central_binomial, table };

/// Evaluator for b_k. All kinds produce exact rational terms; beta is the
/// limit of b_{k+1}/b_k and (alpha, gamma) describe b_k = alpha beta^k +
/// O(beta^{(1-gamma)k}) when known.
class BaseSequence {
 public:
  static BaseSequence geometric(const Rational& beta);
  /// b_k = F_{k+2}: 1, 2, 3, 5, 8, ...
  static BaseSequence fibonacci();
  /// b_k = L_k: 2, 1, 3, 4, 7, ...
  static BaseSequence lucas();
  /// b_k = floor(tau^{k+1}).
  static BaseSequence tau_floor(const Rational& tau);
  /// b_k = binomial(2k, k).
  static BaseSequence central_binomial();
  static BaseSequence table(std::vector<Rational> terms, double beta, std::optional<double> alpha,
                            std::optional<double> gamma);
  /// Reads the table file format: header `beta=<v>` (optional `gamma=`,
  /// `alpha=` lines), then one positive value per line, index 0 first.
  static BaseSequence load_table(const std::filesystem::path& path);
  /// Parses a --base flag value: geometric | fibonacci | lucas |
  /// tau-floor:<tau> | central-binomial | table:<path>. `beta` is required
  /// for geometric.
  static BaseSequence parse(std::string_view text, std::optional<Rational> beta);

  BaseKind kind() const { return kind_; }
  double beta() const { return beta_; }
  /// Exact ratio limit for geometric and tau-floor kinds.
  std::optional<Rational> beta_exact() const { return beta_exact_; }
  std::optional<double> alpha() const { return alpha_; }
  std::optional<double> gamma() const { return gamma_; }
  bool is_geometric() const { return kind_ == BaseKind::geometric; }
  bool integer_valued() const;

  /// First n terms (exact).
  std::vector<Rational> terms(std::size_t n) const;
  Rational term(std::size_t k) const;
  double term_double(std::size_t k) const { return to_double(term(k)); }
  /// Terms b_0..b_K where K is the last index with b_K <= limit; every later
  /// term exceeds `limit`.
  std::vector<Rational> terms_up_to(const Rational& limit) const;
  /// b_k / alpha - beta^k, accurate relative to itself for the kinds with a
  /// closed form (geometric, fibonacci, lucas, tau-floor); table kinds
  /// subtract in double. Requires a declared alpha.
  double scaled_deviation(std::size_t k) const;
  /// scaled_deviation(0..n-1).
  std::vector<double> scaled_deviations(std::size_t n) const;
  /// Length limit for table kinds.
  std::optional<std::size_t> max_terms() const;
  std::string describe() const;

 private:
  BaseKind kind_ = BaseKind::geometric;
  double beta_ = 2.0;
  std::optional<Rational> beta_exact_;
  std::optional<double> alpha_;
  std::optional<double> gamma_;
  std::vector<Rational> table_;
};

struct SystemParams {
  double kappa = 0;
  std::optional<std::int64_t> mu;
  double log_card = 0;  // log_beta |d|
};

constexpr double kDefaultKappaTol = 1e-9;

/// Largest u in (0, 1] with sum_{k>=1} beta^{-floor(k/u)} max(d) <= 1, by
/// bisection to `tol`.
double kappa(double beta, const DigitSet& digits, double tol = kDefaultKappaTol);
/// The feasibility sum for kappa at a given u, summed in constant-floor blocks.
double kappa_sum(double beta, const DigitSet& digits, double u, double tail_tol = 1e-13);
/// Largest number of digits in one residue class mod beta. Requires integer
/// beta >= 2, integer digits and gcd(d) = 1.
std::int64_t mu(std::int64_t beta, const DigitSet& digits);
/// log_beta |d|.
double log_card(double beta, const DigitSet& digits);
SystemParams system_params(const BaseSequence& base, const DigitSet& digits);

/// Integer beta >= 2 of a geometric base, if it has one.
std::optional<std::int64_t> integer_beta(const BaseSequence& base);

}  // namespace numsys
