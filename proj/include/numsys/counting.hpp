#pragma once

// Exact representation counts r(lambda) and counting function S(x).

#include <cstdint>
#include <string>
#include <vector>

#include "numsys/core.hpp"

namespace numsys {

/// r(0..X) for an integer-valued system. Counts live in 64-bit words while
/// they fit and switch to big integers otherwise.
class RepCountTable {
 public:
  RepCountTable(std::string base_id, std::string digit_id, std::vector<std::uint64_t> counts);
  RepCountTable(std::string base_id, std::string digit_id, std::vector<BigInt> counts);

  const std::string& base_id() const { return base_id_; }
  const std::string& digit_id() const { return digit_id_; }
  std::int64_t upper() const { return static_cast<std::int64_t>(size()) - 1; }
  std::size_t size() const { return wide_ ? big_.size() : small_.size(); }
  bool wide() const { return wide_; }

  BigInt at(std::int64_t n) const;
  double at_double(std::int64_t n) const;
  /// S(n) = sum_{m <= n} r(m), as exact integers for n = 0..X.
  std::vector<BigInt> prefix_sums() const;

 private:
  std::string base_id_, digit_id_;
  bool wide_ = false;
  std::vector<std::uint64_t> small_;
  std::vector<BigInt> big_;
};

struct CountResult {
  BigInt value;
  std::uint64_t nodes_explored = 0;
};

/// Node budget for the depth-first counters; exceeding it throws ComputeError.
constexpr std::uint64_t kDefaultNodeBudget = 4'000'000'000ULL;

/// Bounded convolution over digits, one base term at a time.
RepCountTable rep_counts_integer(const BaseSequence& base, const DigitSet& digits, std::int64_t X);

/// r(lambda) by depth-first search from the largest usable b_k downward.
CountResult rep_count_exact(const BaseSequence& base, const DigitSet& digits, const Rational& lambda,
                            std::uint64_t budget = kDefaultNodeBudget);

/// Exhaustive enumeration over d^depth (test oracle). Guard: |d|^depth <= 1e8.
CountResult rep_count_bruteforce(const BaseSequence& base, const DigitSet& digits, const Rational& lambda,
                                 int depth);

/// Histogram of all |d|^depth tuple sums up to X (test oracle for whole
/// tables; integer systems only).
std::vector<std::uint64_t> rep_counts_bruteforce(const BaseSequence& base, const DigitSet& digits, std::int64_t X,
                                                 int depth);

/// S(x) = #{sequences with sum <= x}; 0 for x < 0. Subtrees whose maximal
/// sum fits under the residual are counted in closed form.
CountResult counting_fn(const BaseSequence& base, const DigitSet& digits, const Rational& x,
                        std::uint64_t budget = kDefaultNodeBudget);
/// Every finite double is a rational, so this is exact in x as given.
CountResult counting_fn(const BaseSequence& base, const DigitSet& digits, double x,
                        std::uint64_t budget = kDefaultNodeBudget);

struct ValueCount {
  Rational value;
  BigInt count;
};
/// Every attainable value lambda in (0, X] with r(lambda), ascending. Integer
/// systems go through rep_counts_integer; others enumerate representations
/// one by one, so the work is about S(X) nodes.
std::vector<ValueCount> rep_values_up_to(const BaseSequence& base, const DigitSet& digits, const Rational& X,
                                         std::uint64_t budget = kDefaultNodeBudget);

struct UpperBoundReport {
  std::int64_t X = 0;
  std::int64_t mu = 0;
  double exponent = 0;   // log_beta mu
  double max_ratio = 0;  // max_{1<=n<=X} r(n) / (mu n^{log_beta mu})
  std::int64_t argmax = 0;
  bool violated = false;
};
/// Scan of r(n) <= mu n^{log_beta mu} for an integer geometric system.
UpperBoundReport verify_upper_bound(const BaseSequence& base, const DigitSet& digits, std::int64_t X);
UpperBoundReport verify_upper_bound(const BaseSequence& base, const DigitSet& digits, const RepCountTable& table);

struct WindowReport {
  double x = 0, delta = 0, eps = 0;
  BigInt lhs;  // #{x - delta < value <= x}; for delta = 0, #{value = x}
  double rhs = 0;  // (1 + delta) x^{(1 - kappa) log_beta|d| + eps}
  double ratio = 0;
};
WindowReport window_bound_probe(const BaseSequence& base, const DigitSet& digits, const Rational& x,
                                const Rational& delta, double eps = 0.05);

}  // namespace numsys
