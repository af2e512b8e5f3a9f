#include "numsys/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "numsys/kernels.hpp"

namespace numsys {

// ------------------------------------------------------------ RepCountTable

RepCountTable::RepCountTable(std::string base_id, std::string digit_id, std::vector<std::uint64_t> counts)
    : base_id_(std::move(base_id)), digit_id_(std::move(digit_id)), wide_(false), small_(std::move(counts)) {}

RepCountTable::RepCountTable(std::string base_id, std::string digit_id, std::vector<BigInt> counts)
    : base_id_(std::move(base_id)), digit_id_(std::move(digit_id)), wide_(true), big_(std::move(counts)) {}

BigInt RepCountTable::at(std::int64_t n) const {
  if (n < 0 || n > upper()) throw DomainError("RepCountTable: index out of range");
  if (wide_) return big_[static_cast<std::size_t>(n)];
  BigInt v;
  mpz_import(v.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &small_[static_cast<std::size_t>(n)]);
  return v;
}

double RepCountTable::at_double(std::int64_t n) const {
  if (n < 0 || n > upper()) throw DomainError("RepCountTable: index out of range");
  return wide_ ? big_[static_cast<std::size_t>(n)].get_d() : static_cast<double>(small_[static_cast<std::size_t>(n)]);
}

std::vector<BigInt> RepCountTable::prefix_sums() const {
  std::vector<BigInt> out(size());
  BigInt acc = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    acc += at(static_cast<std::int64_t>(i));
    out[i] = acc;
  }
  return out;
}

namespace {

std::vector<std::int64_t> integer_terms_up_to(const BaseSequence& base, const Rational& limit) {
  std::vector<std::int64_t> out;
  for (const auto& t : base.terms_up_to(limit)) {
    if (t.get_den() != 1 || !t.get_num().fits_slong_p()) throw DomainError("base term is not a 64-bit integer");
    out.push_back(t.get_num().get_si());
  }
  return out;
}

}  // namespace

RepCountTable rep_counts_integer(const BaseSequence& base, const DigitSet& digits, std::int64_t X) {
  if (X < 0) throw DomainError("rep_counts_integer: X must be >= 0");
  if (!digits.is_integer()) throw DomainError("rep_counts_integer: digits must be integers");
  if (!base.integer_valued()) throw DomainError("rep_counts_integer: base terms must be integers");
  const auto dv = digits.integer_values();
  const std::int64_t mnz = dv[1];
  const auto terms = integer_terms_up_to(base, Rational(X / mnz));
  const std::size_t n = static_cast<std::size_t>(X) + 1;

  // Fast path: 64-bit counts with overflow detection in the kernel.
  {
    std::vector<std::uint64_t> cur(n, 0), next;
    cur[0] = 1;
    bool overflow = false;
    for (std::int64_t b : terms) {
      next = cur;
      for (std::size_t i = 1; i < dv.size() && !overflow; ++i) {
        const std::int64_t shift = dv[i] * b;
        if (shift > X) break;
        overflow = kernels::add_shifted_u64(next, cur, static_cast<std::size_t>(shift));
      }
      if (overflow) break;
      cur.swap(next);
    }
    if (!overflow) return RepCountTable(base.describe(), digits.to_string(), std::move(cur));
  }

  std::vector<BigInt> cur(n, BigInt(0)), next;
  cur[0] = 1;
  for (std::int64_t b : terms) {
    next = cur;
    for (std::size_t i = 1; i < dv.size(); ++i) {
      const std::int64_t shift = dv[i] * b;
      if (shift > X) break;
      for (std::size_t j = static_cast<std::size_t>(shift); j < n; ++j) next[j] += cur[j - static_cast<std::size_t>(shift)];
    }
    cur.swap(next);
  }
  return RepCountTable(base.describe(), digits.to_string(), std::move(cur));
}

// ------------------------------------------------------- depth-first search

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

// Integer image of a system: every digit * term and the target multiplied by
// a common denominator D.
struct ScaledSystem {
  BigInt D;
  std::vector<std::vector<BigInt>> vals;  // per level k, nonzero digits ascending
  std::vector<BigInt> suffix_max;         // max sum over levels 0..k
  std::size_t card = 0;
};

ScaledSystem scale_system(const std::vector<Rational>& terms, const DigitSet& digits) {
  ScaledSystem s;
  s.card = digits.cardinality();
  BigInt D = digits.denominator_lcm();
  for (const auto& t : terms) D = lcm(D, BigInt(t.get_den()));
  s.D = D;
  s.vals.resize(terms.size());
  s.suffix_max.resize(terms.size());
  BigInt acc = 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    for (const auto& d : digits.values().subspan(1)) {
      const Rational v = d * terms[k] * Rational(D);
      s.vals[k].push_back(v.get_num());  // integral by construction of D
    }
    acc += s.vals[k].back();
    s.suffix_max[k] = acc;
  }
  return s;
}

bool fits_i120(const BigInt& v) { return mpz_sizeinbase(v.get_mpz_t(), 2) < 120; }

i128 to_i128(const BigInt& v) {
  const bool neg = sgn(v) < 0;
  BigInt a = abs(v);
  std::uint64_t parts[2] = {0, 0};
  size_t count = 0;
  mpz_export(parts, &count, -1, sizeof(std::uint64_t), 0, 0, a.get_mpz_t());
  const i128 r = static_cast<i128>((static_cast<u128>(parts[1]) << 64) | parts[0]);
  return neg ? -r : r;
}

BigInt from_u128(u128 v) {
  std::uint64_t parts[2] = {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64)};
  BigInt z;
  mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, parts);
  return z;
}

template <typename T, typename C>
struct Searcher {
  std::vector<std::vector<T>> vals;
  std::vector<T> suffix_max;
  std::vector<C> pow_card;  // |d|^{k}
  std::uint64_t nodes = 0;
  std::uint64_t budget = 0;

  void tick() {
    if (++nodes > budget) throw ComputeError("counting: node budget exceeded");
  }

  // Number of sequences on levels 0..k with sum <= res (res >= 0).
  C at_most(int k, const T& res) {
    tick();
    if (k < 0) return C(1);
    if (res >= suffix_max[k]) return pow_card[k + 1];
    C total = at_most(k - 1, res);
    for (const T& v : vals[k]) {
      if (v > res) break;
      total += at_most(k - 1, T(res - v));
    }
    return total;
  }

  // Number of sequences on levels 0..k with sum == res (res >= 0).
  C exactly(int k, const T& res) {
    tick();
    if (k < 0) return C(res == T(0) ? 1 : 0);
    if (res > suffix_max[k]) return C(0);
    C total = exactly(k - 1, res);
    for (const T& v : vals[k]) {
      if (v > res) break;
      total += exactly(k - 1, T(res - v));
    }
    return total;
  }
};

enum class Mode { at_most, exactly };

CountResult run_search(const ScaledSystem& sys, const BigInt& target, Mode mode, std::uint64_t budget) {
  const int K = static_cast<int>(sys.vals.size()) - 1;
  BigInt top_pow;
  mpz_ui_pow_ui(top_pow.get_mpz_t(), sys.card, static_cast<unsigned long>(K + 1));
  const bool fast = fits_i120(target) && (K < 0 || fits_i120(sys.suffix_max[K])) && fits_i120(top_pow);
  CountResult out;
  if (fast) {
    Searcher<i128, u128> s;
    s.budget = budget;
    for (const auto& level : sys.vals) {
      s.vals.emplace_back();
      for (const auto& v : level) s.vals.back().push_back(to_i128(v));
    }
    for (const auto& v : sys.suffix_max) s.suffix_max.push_back(to_i128(v));
    s.pow_card.push_back(1);
    for (int k = 0; k <= K; ++k) s.pow_card.push_back(s.pow_card.back() * static_cast<u128>(sys.card));
    const i128 t = to_i128(target);
    out.value = from_u128(mode == Mode::at_most ? s.at_most(K, t) : s.exactly(K, t));
    out.nodes_explored = s.nodes;
  } else {
    Searcher<BigInt, BigInt> s;
    s.budget = budget;
    s.vals = sys.vals;
    s.suffix_max = sys.suffix_max;
    s.pow_card.push_back(1);
    for (int k = 0; k <= K; ++k) s.pow_card.push_back(s.pow_card.back() * static_cast<unsigned long>(sys.card));
    out.value = mode == Mode::at_most ? s.at_most(K, target) : s.exactly(K, target);
    out.nodes_explored = s.nodes;
  }
  return out;
}

BigInt floor_of(const Rational& q) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

}  // namespace

CountResult counting_fn(const BaseSequence& base, const DigitSet& digits, const Rational& x, std::uint64_t budget) {
  if (x < 0) return {BigInt(0), 0};
  const auto terms = base.terms_up_to(x / digits.min_nonzero());
  const ScaledSystem sys = scale_system(terms, digits);
  // sum <= x  <=>  D * sum <= floor(D x), as D * sum is an integer.
  return run_search(sys, floor_of(x * Rational(sys.D)), Mode::at_most, budget);
}

CountResult counting_fn(const BaseSequence& base, const DigitSet& digits, double x, std::uint64_t budget) {
  if (!std::isfinite(x)) throw DomainError("counting_fn: x must be finite");
  return counting_fn(base, digits, exact_rational(x), budget);
}

CountResult rep_count_exact(const BaseSequence& base, const DigitSet& digits, const Rational& lambda,
                            std::uint64_t budget) {
  if (lambda < 0) throw DomainError("rep_count_exact: lambda must be >= 0");
  const auto terms = base.terms_up_to(lambda / digits.min_nonzero());
  const ScaledSystem sys = scale_system(terms, digits);
  const Rational scaled = lambda * Rational(sys.D);
  if (scaled.get_den() != 1) return {BigInt(0), 0};  // off the lattice of attainable sums
  return run_search(sys, scaled.get_num(), Mode::exactly, budget);
}

std::vector<ValueCount> rep_values_up_to(const BaseSequence& base, const DigitSet& digits, const Rational& X,
                                         std::uint64_t budget) {
  std::vector<ValueCount> out;
  if (X <= 0) return out;
  if (digits.is_integer() && base.integer_valued()) {
    const BigInt f = floor_of(X);
    if (!f.fits_slong_p()) throw DomainError("rep_values_up_to: X too large");
    const RepCountTable t = rep_counts_integer(base, digits, f.get_si());
    for (std::int64_t n = 1; n <= t.upper(); ++n) {
      BigInt r = t.at(n);
      if (r != 0) out.push_back({Rational(n), std::move(r)});
    }
    return out;
  }
  const auto terms = base.terms_up_to(X / digits.min_nonzero());
  const auto& vals = digits.values();
  std::map<Rational, BigInt> hist;
  std::uint64_t nodes = 0;
  // Levels from the top down; digits ascend, so the first overshoot ends a level.
  auto walk = [&](auto&& self, std::size_t level, const Rational& partial) -> void {
    if (++nodes > budget) throw ComputeError("rep_values_up_to: node budget exceeded");
    if (level == 0) {
      if (partial > 0) hist[partial] += 1;
      return;
    }
    for (const auto& d : vals) {
      const Rational next = partial + d * terms[level - 1];
      if (next > X) break;
      self(self, level - 1, next);
    }
  };
  walk(walk, terms.size(), Rational(0));
  out.reserve(hist.size());
  for (auto& [v, c] : hist) out.push_back({v, c});
  return out;
}

CountResult rep_count_bruteforce(const BaseSequence& base, const DigitSet& digits, const Rational& lambda,
                                 int depth) {
  if (depth < 0) throw DomainError("rep_count_bruteforce: depth must be >= 0");
  const double space = std::pow(static_cast<double>(digits.cardinality()), depth);
  if (space > 1e8) throw DomainError("rep_count_bruteforce: |d|^depth exceeds 1e8");
  const auto terms = base.terms(static_cast<std::size_t>(depth));
  const auto vals = digits.values();
  CountResult out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(depth), 0);
  // Odometer over all tuples; the sum is recomputed exactly for each one.
  for (;;) {
    Rational sum = 0;
    for (int k = 0; k < depth; ++k) sum += vals[idx[k]] * terms[k];
    ++out.nodes_explored;
    if (sum == lambda) ++out.value;
    int k = 0;
    while (k < depth && ++idx[k] == vals.size()) idx[k++] = 0;
    if (k == depth) break;
  }
  return out;
}

std::vector<std::uint64_t> rep_counts_bruteforce(const BaseSequence& base, const DigitSet& digits, std::int64_t X,
                                                 int depth) {
  if (depth < 0 || X < 0) throw DomainError("rep_counts_bruteforce: depth and X must be >= 0");
  const double space = std::pow(static_cast<double>(digits.cardinality()), depth);
  if (space > 1e8) throw DomainError("rep_counts_bruteforce: |d|^depth exceeds 1e8");
  if (!digits.is_integer() || !base.integer_valued()) throw DomainError("rep_counts_bruteforce: integer systems only");
  const auto dv = digits.integer_values();
  std::vector<std::int64_t> terms;
  for (const auto& t : base.terms(static_cast<std::size_t>(depth))) terms.push_back(t.get_num().get_si());
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(X) + 1, 0);
  // Every tuple is visited; nothing is pruned.
  auto rec = [&](auto&& self, int k, std::int64_t sum) -> void {
    if (k == depth) {
      if (sum <= X) ++hist[static_cast<std::size_t>(sum)];
      return;
    }
    for (std::int64_t d : dv) self(self, k + 1, sum + d * terms[static_cast<std::size_t>(k)]);
  };
  rec(rec, 0, 0);
  return hist;
}

// -------------------------------------------------------------- bound checks

UpperBoundReport verify_upper_bound(const BaseSequence& base, const DigitSet& digits, const RepCountTable& table) {
  const auto ib = integer_beta(base);
  if (!ib) throw DomainError("verify_upper_bound: needs an integer geometric base");
  UpperBoundReport rep;
  rep.X = table.upper();
  rep.mu = mu(*ib, digits);
  rep.exponent = std::log(static_cast<double>(rep.mu)) / std::log(static_cast<double>(*ib));
  for (std::int64_t n = 1; n <= rep.X; ++n) {
    const double bound = static_cast<double>(rep.mu) * std::pow(static_cast<double>(n), rep.exponent);
    const double ratio = table.at_double(n) / bound;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax = n;
    }
  }
  rep.violated = rep.max_ratio > 1.0;
  return rep;
}

UpperBoundReport verify_upper_bound(const BaseSequence& base, const DigitSet& digits, std::int64_t X) {
  const auto ib = integer_beta(base);
  if (!ib) throw DomainError("verify_upper_bound: needs an integer geometric base");
  mu(*ib, digits);  // precondition check before the table is built
  return verify_upper_bound(base, digits, rep_counts_integer(base, digits, X));
}

WindowReport window_bound_probe(const BaseSequence& base, const DigitSet& digits, const Rational& x,
                                const Rational& delta, double eps) {
  if (delta < 0) throw DomainError("window_bound_probe: delta must be >= 0");
  WindowReport rep;
  rep.x = to_double(x);
  rep.delta = to_double(delta);
  rep.eps = eps;
  if (delta == 0) {
    rep.lhs = x < 0 ? BigInt(0) : rep_count_exact(base, digits, x).value;
  } else {
    rep.lhs = counting_fn(base, digits, x).value - counting_fn(base, digits, x - delta).value;
  }
  const double k = kappa(base.beta(), digits);
  const double sigma = log_card(base.beta(), digits);
  rep.rhs = (1.0 + rep.delta) * std::pow(rep.x, (1.0 - k) * sigma + eps);
  rep.ratio = rep.lhs.get_d() / rep.rhs;
  return rep;
}

}  // namespace numsys
