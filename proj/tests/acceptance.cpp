// Acceptance run: one PASS/FAIL line per criterion, with the measured
// numbers that decided it. Exit status is 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "cli.hpp"
#include "numsys/analytic.hpp"
#include "numsys/counting.hpp"
#include "numsys/density.hpp"
#include "numsys/fourier.hpp"
#include "numsys/moments.hpp"
#include "numsys/special.hpp"
#include "numsys/zeta.hpp"

using namespace numsys;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < budget_s, "runtime " + fmt("%.1f", secs) + " s < " + fmt("%.0f", budget_s) + " s");
  std::printf("criterion %d: %s - %s: %s\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Adaptive 5-point Gauss-Legendre with interval bisection.
Complex adaptive_gl(const std::function<Complex(double)>& f, double a, double b, double tol, int depth = 0) {
  static const double x[] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640, -0.9061798459386640};
  static const double w[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                             0.2369268850561891};
  auto rule = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    Complex s = 0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
  };
  const double m = 0.5 * (a + b);
  const Complex whole = rule(a, b), halves = rule(a, m) + rule(m, b);
  if (depth > 40 || std::abs(whole - halves) < tol) return halves;
  return adaptive_gl(f, a, m, tol / 2, depth + 1) + adaptive_gl(f, m, b, tol / 2, depth + 1);
}

// Gamma(s, w) by quadrature in u = w + y^2 on [0, sqrt(120)].
Complex upper_gamma_oracle(Complex s, double w) {
  auto f = [&](double y) {
    const double u = w + y * y;
    return std::exp(-u + (s - 1.0) * std::log(u)) * (2 * y);
  };
  const Complex scale = std::exp(-w + (s - 1.0) * std::log(w));
  return adaptive_gl(f, 0, std::sqrt(120.0), 1e-13 * std::abs(scale));
}

}  // namespace

int main() {
  const BaseSequence bin = BaseSequence::geometric(2);
  const BaseSequence g3 = BaseSequence::geometric(3);
  const DigitSet d01 = parse_digit_set("0,1");
  const DigitSet d015 = parse_digit_set("0,1,5");
  const DigitSet d013 = parse_digit_set("0,1,3");

  criterion(1, "binary reduction", 30, [&] {
    Outcome o;
    const RepCountTable t = rep_counts_integer(bin, d01, 10000);
    bool all_one = true;
    for (std::int64_t n = 0; n <= 10000; ++n) all_one = all_one && t.at(n) == 1;
    o.require(all_one, "r(n) = 1 for n <= 1e4");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1e6);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      bad += counting_fn(bin, d01, x).value != BigInt(static_cast<long>(std::floor(x)) + 1);
    }
    o.require(bad == 0, "S(x) = floor(x) + 1 at 1000 random x (" + std::to_string(bad) + " mismatches)");
    const GeometricZeta z(bin, d01);
    const double e2 = std::abs(z.eval(2.0).value - kPi * kPi / 6);
    const double e0 = std::abs(z.eval(0.0).value + 0.5);
    const double e1 = std::abs(z.eval(-1.0).value + 1.0 / 12);
    const double er = std::abs(residue(2, d01, 0, 0).residue - 1.0);
    o.require(e2 < 1e-8, "|zeta(2) - pi^2/6| = " + fmt("%.1e", e2));
    o.require(e0 < 1e-8, "|zeta(0) + 1/2| = " + fmt("%.1e", e0));
    o.require(e1 < 1e-6, "|zeta(-1) + 1/12| = " + fmt("%.1e", e1));
    o.require(er < 1e-6, "|res(0,0) - 1| = " + fmt("%.1e", er));
    return o;
  });

  criterion(2, "Bernoulli coefficients", 10, [&] {
    Outcome o;
    static const double B[] = {1,        -0.5, 1.0 / 6, 0, -1.0 / 30, 0, 1.0 / 42, 0, -1.0 / 30, 0,
                               5.0 / 66, 0,    -691.0 / 2730};
    double worst_rel = 0, worst_zero = 0, worst_P = 0;
    for (int beta : {2, 3, 5}) {
      std::string text = "0";
      for (int d = 1; d < beta; ++d) text += "," + std::to_string(d);
      const DigitSet ds = parse_digit_set(text);
      const PowerSeries c = c_coeffs(beta, ds, 12);
      for (int l = 0; l <= 12; ++l) {
        const double got = std::tgamma(l + 1.0) * c[l], want = (l % 2 ? -1 : 1) * B[l];
        if (want == 0) worst_zero = std::max(worst_zero, std::abs(got));
        else worst_rel = std::max(worst_rel, std::abs(got - want) / std::abs(want));
      }
      for (int i = 0; i < 256; ++i) worst_P = std::max(worst_P, std::abs(P(beta, ds, i / 256.0)));
    }
    o.require(worst_rel < 1e-10, "max relative error of l! c(l) = " + fmt("%.1e", worst_rel));
    o.require(worst_zero < 1e-10, "max |l! c(l)| where B_l = 0: " + fmt("%.1e", worst_zero));
    o.require(worst_P < 1e-10, "max |P| on 256 points = " + fmt("%.1e", worst_P));
    return o;
  });

  criterion(3, "oracle equivalence", 60, [&] {
    Outcome o;
    std::mt19937 rng(2024);
    long mismatches = 0, spot = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const int beta = 2 + static_cast<int>(rng() % 3);
      const int extra = 1 + static_cast<int>(rng() % 3);
      std::string text = "0";
      for (int i = 0; i < extra; ++i) text += "," + std::to_string(1 + rng() % 9);
      const DigitSet ds = parse_digit_set(text);
      const BaseSequence b = BaseSequence::geometric(beta);
      // Terms above 200 cannot contribute to any n <= 200.
      int depth = 0;
      while (std::pow(beta, depth) <= 200) ++depth;
      const RepCountTable t = rep_counts_integer(b, ds, 200);
      const auto brute = rep_counts_bruteforce(b, ds, 200, depth);
      for (std::int64_t n = 0; n <= 200; ++n) mismatches += t.at(n) != brute[n];
      for (int i = 0; i < 3; ++i) {
        const long n = static_cast<long>(rng() % 201);
        spot += rep_count_bruteforce(b, ds, n, depth).value != t.at(n);
      }
    }
    o.require(mismatches == 0, "200 systems, n <= 200: " + std::to_string(mismatches) + " mismatches");
    o.require(spot == 0, "per-value brute-force spot checks: " + std::to_string(spot) + " mismatches");
    return o;
  });

  criterion(4, "upper bound and two-sided bound", 60, [&] {
    Outcome o;
    for (const auto& [b, d, name] : {std::tuple{bin, d01, "(2,{0,1})"}, std::tuple{g3, d013, "(3,{0,1,3})"},
                                     std::tuple{g3, d015, "(3,{0,1,5})"}}) {
      const auto ub = verify_upper_bound(b, d, 10000);
      o.require(ub.max_ratio <= 1.0, std::string(name) + " max r/bound = " + fmt("%.4f", ub.max_ratio));
      const auto sw = sandwich_check(b, d, 1e4, 50, 14);
      o.require(sw.holds && sw.samples.size() + sw.skipped == 50,
                std::string(name) + " sandwich at 50 x, worst margins " + fmt("%.3g", sw.worst_lower) + " / " +
                    fmt("%.3g", sw.worst_upper));
    }
    return o;
  });

  criterion(5, "Fourier consistency", 300, [&] {
    Outcome o;
    const DensityProfile p = density_profile(g3, d015, 1024, 12);
    const std::vector<double> v = p.values();
    const FourierTable t = fourier_table(3, d015, 16);
    double dft_err = 0;
    for (long k = -8; k <= 8; ++k) dft_err = std::max(dft_err, std::abs(dft_coeff(v, k) - t.at(k)));
    o.require(dft_err < 1e-4, "max |psi_hat - DFT| for |k| <= 8 = " + fmt("%.1e", dft_err));
    double resum_err = 0;
    for (int i = 0; i < 100; ++i) {
      const double x = i / 100.0;
      resum_err = std::max(resum_err, std::abs(resum(x, t, 16).value - psi_scaling_value(g3, d015, x, 12)));
    }
    o.require(resum_err < 1e-3, "K = 16 resummation vs depth-12 scaling, max error = " + fmt("%.2e", resum_err));
    o.require(t.hermitian_defect() < 1e-10, "Hermitian defect = " + fmt("%.1e", t.hermitian_defect()));
    return o;
  });

  criterion(6, "continuation consistency", 120, [&] {
    Outcome o;
    for (const auto& [b, d, name] : {std::tuple{bin, d01, "binary"}, std::tuple{g3, d015, "(3,{0,1,5})"}}) {
      const GeometricZeta g(b, d);
      const DirectZeta direct(b, d, 1e6);
      double worst = 0, shift = 0;
      for (int i = 0; i < 20; ++i) {
        const Complex s(g.sigma() + 0.5, -5 + 10.0 * i / 19);
        const Complex ref = g.eval(s).value;
        worst = std::max(worst, std::abs(direct.eval(s).value - ref));
        for (int c = g.rho() + 1; c <= g.rho() + 2; ++c)
          shift = std::max(shift, std::abs(GeometricZeta(b, d, c).eval(s).value - ref));
        // Also left of the abscissa, where only the continuation is available.
        const Complex sl(g.sigma() - 1.3, -5 + 10.0 * i / 19);
        const Complex refl = g.eval(sl).value;
        for (int c = g.rho() + 1; c <= g.rho() + 2; ++c)
          shift = std::max(shift, std::abs(GeometricZeta(b, d, c).eval(sl).value - refl) / std::max(1.0, std::abs(refl)));
      }
      o.require(worst < 1e-6, std::string(name) + " |direct - continued| = " + fmt("%.1e", worst));
      o.require(shift < 1e-8, std::string(name) + " c_shift spread = " + fmt("%.1e", shift));
    }
    double resid = 0;
    int pairs = 0;
    for (const auto& [beta, text] : {std::pair{2.0, "0,1"}, std::pair{3.0, "0,1,5"}, std::pair{1.8, "0,1/2,3"},
                                     std::pair{2.0, "0,1,5"}}) {
      for (double t : {1.0, 0.5, 0.1, 1e-3, 1e-6}) {
        resid = std::max(resid, std::abs(euler_maclaurin_identity_check(beta, parse_digit_set(text), t).diff));
        ++pairs;
      }
    }
    o.require(resid < 1e-10, "identity residual over " + std::to_string(pairs) + " (t, system) pairs = " + fmt("%.1e", resid));
    return o;
  });

  criterion(7, "trivial zeros", 30, [&] {
    Outcome o;
    const DigitSet d = parse_digit_set("0,1,5");
    const GeometricZeta z(bin, d);
    double worst = 0;
    for (int n = 1; n <= 3; ++n) worst = std::max(worst, std::abs(z.eval(static_cast<double>(-n)).value));
    o.require(worst < 1e-8, "max |zeta(-n)|, n = 1..3: " + fmt("%.1e", worst));
    const double e0 = std::abs(z.eval(0.0).value + 1.0);
    o.require(e0 < 1e-8, "|zeta(0) + 1| = " + fmt("%.1e", e0));
    o.require(special_value(2, d, 0) == -1.0 && special_value(2, d, 2) == 0.0, "closed-form branch agrees");
    return o;
  });

  criterion(8, "Chow-Slattery desk scale", 300, [&] {
    Outcome o;
    const ChowSlatteryReport f = chow_slattery_report("fibonacci", 25);
    double last_steps = 0;
    for (const auto& row : f.rows)
      if (row.n >= 21) last_steps = std::max(last_steps, std::abs(row.gap_step));
    o.require(last_steps < 0.05, "Fibonacci |gap(n) - gap(n-1)| for n = 21..25 <= " + fmt("%.1e", last_steps) +
                                     " (table X = " + fmt("%.0f", f.rows.back().threshold) + ")");
    const DensityProfile p = density_profile(g3, d015, 512, 12);
    const MomentReport m = moment_report(g3, d015, 1, 0, {8, 10, 12}, p);
    const bool decreasing = m.relative_gaps[1] < m.relative_gaps[0] && m.relative_gaps[2] < m.relative_gaps[1];
    o.require(m.relative_gaps[2] < 0.05, "(3,{0,1,5}) k = 1 relative gap at n = 12: " + fmt("%.1e", m.relative_gaps[2]));
    o.require(decreasing, "gaps decrease over n = 8, 10, 12");
    return o;
  });

  criterion(9, "figure1 panels", 300, [&] {
    Outcome o;
    cli::RunConfig cfg;
    cfg.command = "figure1";
    const Report r = cli::build_report(cfg);
    std::vector<double> xa, va, ea, xb, vb;
    for (const auto& row : r.rows) {
      const bool a = std::get<std::string>(row[0]) == "a";
      (a ? xa : xb).push_back(std::get<double>(row[1]));
      (a ? va : vb).push_back(std::get<double>(row[2]));
      if (a) ea.push_back(std::get<double>(row[4]));
    }
    bool grid = xa.size() == 1001 && xb.size() == 1001;
    for (std::size_t k = 0; grid && k < 1001; ++k)
      grid = xa[k] == 8 + static_cast<double>(k) / 500 && xb[k] == 6 + static_cast<double>(k) / 500;
    o.require(grid, "grids 8 + k/500 and 6 + k/500, k = 0..1000");
    bool positive = true;
    for (double v : va) positive = positive && v > 0;
    for (double v : vb) positive = positive && v > 0;
    o.require(positive, "all values positive");
    double worst = 0;
    bool periodic = true;
    for (std::size_t k = 0; k + 500 < xa.size(); ++k) {
      const double gap = std::abs(va[k + 500] - va[k]);
      periodic = periodic && gap < 10 * ea[k];
      worst = std::max(worst, gap / ea[k]);
    }
    o.require(periodic, "panel (a) period-1 gap / error bound <= " + fmt("%.3f", worst));
    return o;
  });

  criterion(10, "special functions", 30, [&] {
    Outcome o;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> re(-30, 30), im(-50, 50);
    double rec = 0;
    for (int i = 0; i < 100; ++i) {
      const Complex s(re(rng), im(rng));
      rec = std::max(rec, rel(gamma_complex(s + 1.0), s * gamma_complex(s)));
    }
    o.require(rec < 1e-12, "Gamma recurrence residual = " + fmt("%.1e", rec));
    std::uniform_real_distribution<double> sr(-3, 6), si(-6, 6), ww(0.2, 20);
    double inc = 0;
    for (int i = 0; i < 50; ++i) {
      const Complex s(sr(rng), si(rng));
      const double w = ww(rng);
      inc = std::max(inc, rel(upper_incomplete_gamma(s, w), upper_gamma_oracle(s, w)));
    }
    o.require(inc < 1e-9, "Gamma(s, w) vs adaptive quadrature, max relative error = " + fmt("%.1e", inc));
    double g1 = 0;
    for (double w : {1e-3, 0.1, 0.5, 1.0, 2.5, 7.0, 15.0, 30.0})
      g1 = std::max(g1, std::abs(upper_incomplete_gamma(1.0, w).real() - std::exp(-w)) / std::exp(-w));
    o.require(g1 < 1e-12, "Gamma(1, w) = e^{-w}, max relative error = " + fmt("%.1e", g1));
    return o;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
