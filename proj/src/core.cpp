#include "numsys/core.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace numsys {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw DomainError("empty numeric value");
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      Rational q(BigInt(trim(s.substr(0, slash))), BigInt(trim(s.substr(slash + 1))));
      if (q.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
      q.canonicalize();
      return q;
    }
    // Decimal with optional exponent, parsed exactly.
    std::string mant = s;
    long exp10 = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
      mant = s.substr(0, e);
      exp10 = std::stol(s.substr(e + 1));
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant.erase(0, 1);
    }
    std::string digits;
    long frac_len = 0;
    bool seen_dot = false;
    for (char c : mant) {
      if (c == '.') {
        if (seen_dot) throw DomainError("malformed number '" + s + "'");
        seen_dot = true;
      } else if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (seen_dot) ++frac_len;
      } else {
        throw DomainError("malformed number '" + s + "'");
      }
    }
    if (digits.empty()) throw DomainError("malformed number '" + s + "'");
    BigInt num(digits);
    if (neg) num = -num;
    const long shift = exp10 - frac_len;
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational q = shift < 0 ? Rational(num, scale) : Rational(num * scale);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed number '" + s + "'");
  }
}

// ---------------------------------------------------------------- DigitSet

DigitSet DigitSet::make(std::vector<Rational> values) {
  if (values.empty()) throw DomainError("digit set is empty");
  for (auto& v : values) {
    v.canonicalize();
    if (v < 0) throw DomainError("digit set contains a negative value");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.front() != 0) throw DomainError("digit set must contain 0");
  if (values.size() < 2) throw DomainError("digit set needs at least two distinct values");

  DigitSet d;
  d.values_ = std::move(values);
  d.doubles_.reserve(d.values_.size());
  for (const auto& v : d.values_) d.doubles_.push_back(to_double(v));
  if (std::all_of(d.values_.begin(), d.values_.end(), is_integral)) {
    BigInt g = 0;
    for (const auto& v : d.values_) g = gcd(g, BigInt(v.get_num()));
    if (!g.fits_slong_p()) throw DomainError("digit gcd out of range");
    d.gcd_ = g.get_si();
  }
  return d;
}

DigitSet make_digit_set(std::vector<Rational> values) { return DigitSet::make(std::move(values)); }

DigitSet parse_digit_set(std::string_view text) {
  std::vector<Rational> vals;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    vals.push_back(parse_rational(item));
  }
  return DigitSet::make(std::move(vals));
}

double DigitSet::sum_double() const { return std::accumulate(doubles_.begin(), doubles_.end(), 0.0); }

std::vector<std::int64_t> DigitSet::integer_values() const {
  if (!is_integer()) throw DomainError("digit set is not integer-valued");
  std::vector<std::int64_t> out;
  for (const auto& v : values_) {
    if (!v.get_num().fits_slong_p()) throw DomainError("digit out of 64-bit range");
    out.push_back(v.get_num().get_si());
  }
  return out;
}

BigInt DigitSet::denominator_lcm() const {
  BigInt l = 1;
  for (const auto& v : values_) l = lcm(l, BigInt(v.get_den()));
  return l;
}

bool DigitSet::is_full_range() const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] != Rational(static_cast<long>(i))) return false;
  return true;
}

std::string DigitSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) s += ",";
    s += values_[i].get_str();
  }
  return s + "}";
}

// ------------------------------------------------------------ BaseSequence

namespace {

constexpr double kPhi = std::numbers::phi;

Rational rational_pow(const Rational& b, std::size_t k) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), k);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

BaseSequence BaseSequence::geometric(const Rational& beta) {
  if (beta <= 1) throw DomainError("geometric base needs beta > 1");
  BaseSequence b;
  b.kind_ = BaseKind::geometric;
  b.beta_exact_ = beta;
  b.beta_ = to_double(beta);
  b.alpha_ = 1.0;
  b.gamma_ = 1.0;
  return b;
}

BaseSequence BaseSequence::fibonacci() {
  BaseSequence b;
  b.kind_ = BaseKind::fibonacci;
  b.beta_ = kPhi;
  b.alpha_ = kPhi * kPhi / std::sqrt(5.0);
  b.gamma_ = 1.0;
  return b;
}

BaseSequence BaseSequence::lucas() {
  BaseSequence b;
  b.kind_ = BaseKind::lucas;
  b.beta_ = kPhi;
  b.gamma_ = 1.0;
  // b_40 / phi^40 in 256-bit floats; in doubles the rounding of phi^40 alone
  // moves the ratio by 1e-15, which B(t) would amplify like 1/t.
  mpf_class root5(5, 256), phi(0, 256), pw(1, 256);
  root5 = sqrt(root5);
  phi = (1 + root5) / 2;
  for (int i = 0; i < 40; ++i) pw *= phi;
  mpf_class ratio(b.term(40), 256);
  ratio /= pw;
  b.alpha_ = ratio.get_d();
  return b;
}

BaseSequence BaseSequence::tau_floor(const Rational& tau) {
  if (tau <= 1) throw DomainError("tau-floor base needs tau > 1");
  BaseSequence b;
  b.kind_ = BaseKind::tau_floor;
  b.beta_exact_ = tau;
  b.beta_ = to_double(tau);
  // floor(tau^{k+1}) = tau * tau^k + O(1).
  b.alpha_ = b.beta_;
  b.gamma_ = 1.0;
  return b;
}

double BaseSequence::scaled_deviation(std::size_t k) const {
  if (!alpha_) throw DomainError("scaled_deviation: base does not declare alpha");
  const double kd = static_cast<double>(k);
  const double sign = k % 2 ? -1.0 : 1.0;
  switch (kind_) {
    case BaseKind::geometric:
      return 0.0;
    case BaseKind::fibonacci:
      // F_{k+2} sqrt5 / phi^2 - phi^k = -psi^{k+2} / phi^2, psi = -1/phi.
      return -sign * std::pow(kPhi, -kd - 4.0);
    case BaseKind::lucas:
      // L_k = phi^k + psi^k.
      return sign * std::pow(kPhi, -kd) / *alpha_ + std::pow(kPhi, kd) * (1.0 / *alpha_ - 1.0);
    case BaseKind::tau_floor: {
      // floor(tau^{k+1}) / tau - tau^k = -frac(tau^{k+1}) / tau.
      const Rational p = rational_pow(*beta_exact_, k + 1);
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), p.get_num_mpz_t(), p.get_den_mpz_t());
      return -to_double(Rational(p - f) / *beta_exact_);
    }
    default:
      return term_double(k) / *alpha_ - std::pow(beta_, kd);
  }
}

std::vector<double> BaseSequence::scaled_deviations(std::size_t n) const {
  std::vector<double> out(n);
  if (kind_ == BaseKind::tau_floor) {
    // Incremental exact powers of tau.
    Rational p = 1;
    for (std::size_t k = 0; k < n; ++k) {
      p *= *beta_exact_;
      BigInt f;
      mpz_fdiv_q(f.get_mpz_t(), p.get_num_mpz_t(), p.get_den_mpz_t());
      out[k] = -to_double(Rational(p - f) / *beta_exact_);
    }
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) out[k] = scaled_deviation(k);
  return out;
}

BaseSequence BaseSequence::central_binomial() {
  BaseSequence b;
  b.kind_ = BaseKind::central_binomial;
  b.beta_ = 4.0;
  return b;
}

BaseSequence BaseSequence::table(std::vector<Rational> terms, double beta, std::optional<double> alpha,
                                 std::optional<double> gamma) {
  if (terms.empty()) throw DomainError("base table is empty");
  for (const auto& t : terms)
    if (t <= 0) throw DomainError("base table values must be positive");
  if (!(beta > 1)) throw DomainError("base table needs beta > 1");
  if (alpha && !(*alpha > 0)) throw DomainError("base table alpha must be positive");
  if (gamma && !(*gamma > 0 && *gamma <= 1)) throw DomainError("base table gamma must lie in (0,1]");
  BaseSequence b;
  b.kind_ = BaseKind::table;
  b.beta_ = beta;
  b.alpha_ = alpha;
  b.gamma_ = gamma;
  b.table_ = std::move(terms);
  return b;
}

BaseSequence BaseSequence::load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open base table '" + path.string() + "'");
  std::optional<double> beta, alpha, gamma;
  std::vector<Rational> terms;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (const auto eq = t.find('='); eq != std::string::npos) {
      const std::string key = trim(t.substr(0, eq));
      const double val = to_double(parse_rational(t.substr(eq + 1)));
      if (key == "beta")
        beta = val;
      else if (key == "alpha")
        alpha = val;
      else if (key == "gamma")
        gamma = val;
      else
        throw DomainError("unknown base table header '" + key + "'");
      continue;
    }
    terms.push_back(parse_rational(t));
  }
  if (!beta) throw DomainError("base table missing 'beta=' header");
  return table(std::move(terms), *beta, alpha, gamma);
}

BaseSequence BaseSequence::parse(std::string_view text, std::optional<Rational> beta) {
  const std::string s = trim(text);
  if (s == "geometric") {
    if (!beta) throw DomainError("geometric base needs --beta");
    return geometric(*beta);
  }
  if (s == "fibonacci") return fibonacci();
  if (s == "lucas") return lucas();
  if (s == "central-binomial") return central_binomial();
  if (s.rfind("tau-floor:", 0) == 0) return tau_floor(parse_rational(s.substr(10)));
  if (s.rfind("table:", 0) == 0) return load_table(s.substr(6));
  throw DomainError("unknown base kind '" + s + "'");
}

bool BaseSequence::integer_valued() const {
  switch (kind_) {
    case BaseKind::geometric:
      return is_integral(*beta_exact_);
    case BaseKind::table:
      return std::all_of(table_.begin(), table_.end(), is_integral);
    default:
      return true;
  }
}

std::optional<std::size_t> BaseSequence::max_terms() const {
  if (kind_ == BaseKind::table) return table_.size();
  return std::nullopt;
}

std::vector<Rational> BaseSequence::terms(std::size_t n) const {
  std::vector<Rational> out;
  out.reserve(n);
  switch (kind_) {
    case BaseKind::geometric: {
      Rational p = 1;
      for (std::size_t k = 0; k < n; ++k) {
        out.push_back(p);
        p *= *beta_exact_;
      }
      break;
    }
    case BaseKind::fibonacci: {
      BigInt a = 1, b = 2;
      for (std::size_t k = 0; k < n; ++k) {
        out.emplace_back(a);
        BigInt c = a + b;
        a = b;
        b = c;
      }
      break;
    }
    case BaseKind::lucas: {
      BigInt a = 2, b = 1;
      for (std::size_t k = 0; k < n; ++k) {
        out.emplace_back(a);
        BigInt c = a + b;
        a = b;
        b = c;
      }
      break;
    }
    case BaseKind::tau_floor: {
      const Rational& tau = *beta_exact_;
      for (std::size_t k = 0; k < n; ++k) {
        const Rational p = rational_pow(tau, k + 1);
        BigInt f;
        mpz_fdiv_q(f.get_mpz_t(), p.get_num_mpz_t(), p.get_den_mpz_t());
        out.emplace_back(f);
      }
      break;
    }
    case BaseKind::central_binomial: {
      BigInt c = 1;
      for (std::size_t k = 0; k < n; ++k) {
        out.emplace_back(c);
        c = c * (2 * (2 * k + 1));
        c /= static_cast<unsigned long>(k + 1);
      }
      break;
    }
    case BaseKind::table: {
      if (n > table_.size())
        throw ComputeError("base table has " + std::to_string(table_.size()) + " terms, " + std::to_string(n) +
                           " requested");
      out.assign(table_.begin(), table_.begin() + static_cast<std::ptrdiff_t>(n));
      break;
    }
  }
  return out;
}

Rational BaseSequence::term(std::size_t k) const {
  if (kind_ == BaseKind::geometric) return rational_pow(*beta_exact_, k);
  return terms(k + 1).back();
}

std::vector<Rational> BaseSequence::terms_up_to(const Rational& limit) const {
  // Grow until a term exceeds the limit at a point where the sequence is
  // increasing; the ratio limit beta > 1 guarantees this is eventually final.
  std::size_t n = 16;
  for (;;) {
    if (kind_ == BaseKind::table) n = std::min(n, table_.size());
    std::vector<Rational> t = terms(n);
    std::size_t last = 0;
    bool found = false;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] <= limit) {
        last = k;
        found = true;
      }
    }
    // Require a strictly increasing run of three terms above the limit.
    bool settled = false;
    if (t.size() >= last + 4) {
      settled = true;
      for (std::size_t k = last + 1; k + 1 < t.size() && k < last + 4; ++k)
        if (!(t[k] > limit && t[k + 1] > t[k])) settled = false;
    }
    if (settled || (kind_ == BaseKind::table && n == table_.size())) {
      if (!found) return {};
      if (kind_ == BaseKind::table && !settled && t.back() <= limit)
        throw ComputeError("base table too short for threshold " + limit.get_str());
      t.resize(last + 1);
      return t;
    }
    n *= 2;
    if (n > (1u << 20)) throw ComputeError("base sequence does not exceed threshold");
  }
}

std::string BaseSequence::describe() const {
  switch (kind_) {
    case BaseKind::geometric:
      return "geometric(" + beta_exact_->get_str() + ")";
    case BaseKind::fibonacci:
      return "fibonacci";
    case BaseKind::lucas:
      return "lucas";
    case BaseKind::tau_floor:
      return "tau-floor(" + beta_exact_->get_str() + ")";
    case BaseKind::central_binomial:
      return "central-binomial";
    case BaseKind::table:
      return "table";
  }
  return "?";
}

std::optional<std::int64_t> integer_beta(const BaseSequence& base) {
  if (!base.is_geometric()) return std::nullopt;
  const Rational b = *base.beta_exact();
  if (!is_integral(b) || !b.get_num().fits_slong_p()) return std::nullopt;
  return b.get_num().get_si();
}

// ------------------------------------------------------------- constants

double kappa_sum(double beta, const DigitSet& digits, double u, double tail_tol) {
  // k >= 1 with floor(k/u) = m are the integers in [m u, (m+1) u).
  auto below = [](double y) { return std::max(0.0, std::ceil(y) - 1.0); };  // #{k >= 1 : k < y}
  const double maxd = digits.max_double();
  double sum = 0.0;
  double w = 1.0;  // beta^{-m}
  const double tail_factor = (u + 1.0) * maxd / (1.0 - 1.0 / beta);
  for (long m = 0;; ++m) {
    const double count = below((m + 1) * u) - below(m * u);
    sum += count * w * maxd;
    w /= beta;
    if (tail_factor * w < tail_tol) break;
  }
  return sum;
}

double kappa(double beta, const DigitSet& digits, double tol) {
  if (!(tol > 0)) throw DomainError("kappa: tol must be positive");
  if (!(beta > 1)) throw DomainError("kappa: beta must exceed 1");
  const double tail_tol = tol / 10;
  auto feasible = [&](double u) { return kappa_sum(beta, digits, u, tail_tol) <= 1.0; };
  if (feasible(1.0)) return 1.0;  // kappa is capped at 1
  double lo = 0.5;
  while (!feasible(lo)) {
    lo /= 2;
    if (lo < 1e-12) throw ComputeError("kappa: no feasible u found");
  }
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::int64_t mu(std::int64_t beta, const DigitSet& digits) {
  if (beta < 2) throw DomainError("mu: beta must be an integer >= 2");
  if (!digits.is_integer()) throw DomainError("mu: digits must be integers");
  if (*digits.gcd_if_integer() != 1) throw DomainError("mu: gcd of the digit set must be 1");
  std::map<std::int64_t, std::int64_t> classes;
  for (auto d : digits.integer_values()) ++classes[d % beta];
  std::int64_t best = 0;
  for (const auto& [r, c] : classes) best = std::max(best, c);
  return best;
}

double log_card(double beta, const DigitSet& digits) {
  return std::log(static_cast<double>(digits.cardinality())) / std::log(beta);
}

SystemParams system_params(const BaseSequence& base, const DigitSet& digits) {
  SystemParams p;
  p.kappa = kappa(base.beta(), digits);
  p.log_card = log_card(base.beta(), digits);
  if (auto ib = integer_beta(base); ib && digits.is_integer() && *digits.gcd_if_integer() == 1)
    p.mu = mu(*ib, digits);
  return p;
}

}  // namespace numsys
