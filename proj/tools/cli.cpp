#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "numsys/analytic.hpp"
#include "numsys/core.hpp"
#include "numsys/counting.hpp"
#include "numsys/density.hpp"
#include "numsys/fourier.hpp"
#include "numsys/moments.hpp"
#include "numsys/zeta.hpp"

namespace numsys::cli {

namespace {

Cell big_cell(const BigInt& v) {
  if (v.fits_slong_p()) return static_cast<std::int64_t>(v.get_si());
  return v.get_str();
}

std::string rat_str(const Rational& q) { return q.get_str(); }

struct System {
  BaseSequence base;
  DigitSet digits;
};

System make_system(const RunConfig& cfg) {
  if (!cfg.digits) throw DomainError("--digits is required");
  System s{BaseSequence::parse(cfg.base, cfg.beta ? std::optional<Rational>(parse_rational(*cfg.beta)) : std::nullopt),
           parse_digit_set(*cfg.digits)};
  return s;
}

void add_system_meta(Report& r, const System& sys) {
  r.meta.emplace_back("base", sys.base.describe());
  r.meta.emplace_back("digits", sys.digits.to_string());
  r.meta.emplace_back("beta", sys.base.beta());
  r.meta.emplace_back("sigma", log_card(sys.base.beta(), sys.digits));
}

// Largest depth whose threshold keeps S near the enumeration guard.
int default_depth(const RunConfig& cfg, const DigitSet& digits) {
  if (cfg.depth) return *cfg.depth;
  const double card = static_cast<double>(digits.cardinality());
  const int n = static_cast<int>(std::floor(std::log(cfg.max_count) / std::log(card))) - 1;
  return std::clamp(n, 4, 24);
}

Complex parse_s(const std::string& text) {
  double re = 0, im = 0;
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, comma);
    re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    if (comma != std::string::npos) {
      const std::string b = text.substr(comma + 1);
      im = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    }
  } catch (const std::logic_error&) {
    throw DomainError("--s expects <re> or <re>,<im>, got '" + text + "'");
  }
  return {re, im};
}

// ------------------------------------------------------------------ count

Report count_report(const RunConfig& cfg) {
  const System sys = make_system(cfg);
  Report r;
  add_system_meta(r, sys);
  const auto budget = static_cast<std::uint64_t>(cfg.max_count);
  if (!cfg.at.empty()) {
    r.name = "counting_function";
    r.columns = {"x", "S"};
    for (const auto& a : cfg.at) {
      const Rational x = parse_rational(a);
      r.rows.push_back({rat_str(x), big_cell(counting_fn(sys.base, sys.digits, x, budget).value)});
    }
    return r;
  }
  if (cfg.lambda) {
    r.name = "representation_count";
    r.columns = {"lambda", "r"};
    const Rational l = parse_rational(*cfg.lambda);
    r.rows.push_back({rat_str(l), big_cell(rep_count_exact(sys.base, sys.digits, l, budget).value)});
    return r;
  }
  if (!cfg.upto) throw DomainError("count needs --upto, --at or --lambda");
  if (*cfg.upto < 0) throw DomainError("--upto must be >= 0");
  if (static_cast<double>(*cfg.upto) > cfg.max_count) throw DomainError("--upto exceeds --max-count");
  r.name = "representation_counts";
  if (sys.digits.is_integer() && sys.base.integer_valued()) {
    r.columns = {"n", "r"};
    const RepCountTable t = rep_counts_integer(sys.base, sys.digits, *cfg.upto);
    for (std::int64_t n = 0; n <= t.upper(); ++n) r.rows.push_back({n, big_cell(t.at(n))});
  } else {
    r.columns = {"lambda", "r"};
    r.rows.push_back({std::string("0"), std::int64_t{1}});
    for (const auto& v : rep_values_up_to(sys.base, sys.digits, Rational(*cfg.upto), budget))
      r.rows.push_back({rat_str(v.value), big_cell(v.count)});
  }
  return r;
}

// ---------------------------------------------------------------- density

Report density_report(const RunConfig& cfg) {
  const System sys = make_system(cfg);
  if (cfg.points < 1) throw DomainError("--points must be >= 1");
  const int depth = default_depth(cfg, sys.digits);
  const DensityProfile p = density_profile(sys.base, sys.digits, cfg.points, depth);
  Report r;
  r.name = "density_profile";
  add_system_meta(r, sys);
  r.meta.emplace_back("error_constant", p.error_constant);
  r.columns = {"x", "psi", "depth", "error_bound"};
  for (const auto& e : p.estimates) r.rows.push_back({e.x, e.value, std::int64_t{e.depth}, e.error_bound});
  return r;
}

// ---------------------------------------------------------------- fourier

Report fourier_report(const RunConfig& cfg) {
  const System sys = make_system(cfg);
  if (cfg.kmax < 0) throw DomainError("--kmax must be >= 0");
  const FourierTable t = fourier_table(sys.base.beta(), sys.digits, cfg.kmax, std::min(cfg.tol, 1e-10));
  Report r;
  r.name = "fourier_coefficients";
  add_system_meta(r, sys);
  r.meta.emplace_back("hermitian_defect", t.hermitian_defect());
  r.columns = {"k", "re", "im", "abs"};
  for (const auto& [k, v] : t.entries) r.rows.push_back({std::int64_t{k}, v.real(), v.imag(), std::abs(v)});
  return r;
}

// ----------------------------------------------------------------- coeffs

Report coeffs_report(const RunConfig& cfg) {
  const System sys = make_system(cfg);
  const double beta = sys.base.beta();
  const PowerSeries Lc = L_coeffs(sys.digits, cfg.m);
  const PowerSeries c = c_coeffs(beta, sys.digits, cfg.m);
  const RadiusInfo rad = radius(beta, sys.digits, std::max<std::size_t>(cfg.m, 40));
  Report r;
  r.name = "coefficients";
  add_system_meta(r, sys);
  r.columns = {"name", "index", "value"};
  for (std::size_t h = 0; h <= cfg.m; ++h) r.rows.push_back({std::string("L"), std::int64_t(h), Lc[h]});
  for (std::size_t l = 0; l <= cfg.m; ++l) r.rows.push_back({std::string("c"), std::int64_t(l), c[l]});
  r.rows.push_back({std::string("sigma"), std::int64_t{0}, log_card(beta, sys.digits)});
  r.rows.push_back({std::string("rho"), std::int64_t{0}, static_cast<double>(rad.rho)});
  r.rows.push_back({std::string("radius"), std::int64_t{0}, rad.sigma_est});
  r.rows.push_back({std::string("kappa"), std::int64_t{0}, kappa(beta, sys.digits)});
  return r;
}

// ------------------------------------------------------------------- zeta

ZetaEval eval_zeta(const RunConfig& cfg, const System& sys, Complex s) {
  const double sigma = log_card(sys.base.beta(), sys.digits);
  std::string m = cfg.method;
  if (m == "auto") {
    if (sys.base.is_geometric()) m = "geometric";
    else if (sys.base.alpha() && sys.base.gamma()) m = s.real() >= sigma + 0.2 ? "direct" : "perturbed";
    else m = "direct";
  }
  const double tol = std::min(cfg.tol, 1e-10);
  if (m == "geometric") return zeta_continued_geometric(sys.base, sys.digits, s, cfg.c_shift, tol);
  if (m == "perturbed") return zeta_continued_perturbed(sys.base, sys.digits, s, tol);
  if (m == "direct") return zeta_direct(sys.base, sys.digits, s, cfg.X);
  throw DomainError("--method must be auto, direct, geometric or perturbed");
}

Report zeta_report(const RunConfig& cfg) {
  const System sys = make_system(cfg);
  const double beta = sys.base.beta();
  Report r;
  add_system_meta(r, sys);
  if (cfg.poles) {
    if (!sys.base.is_geometric()) throw DomainError("--poles needs a geometric base");
    r.name = "pole_grid";
    r.columns = {"j", "k", "loc_re", "loc_im", "res_re", "res_im"};
    for (const auto& p : pole_grid(beta, sys.digits, cfg.jmax, cfg.kmax))
      r.rows.push_back({std::int64_t{p.j}, std::int64_t{p.k}, p.location.real(), p.location.imag(),
                        p.residue.real(), p.residue.imag()});
    return r;
  }
  if (cfg.special) {
    if (!sys.base.is_geometric()) throw DomainError("--special needs a geometric base");
    if (*cfg.special < 0) throw DomainError("--special must be >= 0");
    r.name = "special_values";
    r.columns = {"n", "value"};
    for (int n = 0; n <= *cfg.special; ++n) r.rows.push_back({std::int64_t{-n}, special_value(beta, sys.digits, n)});
    return r;
  }
  if (!cfg.s) throw DomainError("zeta needs --s, --poles or --special");
  const ZetaEval e = eval_zeta(cfg, sys, parse_s(*cfg.s));
  r.name = "zeta";
  r.columns = {"s_re", "s_im", "value_re", "value_im", "method", "lambda_cut", "ell_cut", "c_shift", "est_error"};
  r.rows.push_back({e.s.real(), e.s.imag(), e.value.real(), e.value.imag(), std::string(method_name(e.method)),
                    e.truncations.lambda_cut, std::int64_t{e.truncations.ell_cut}, std::int64_t{e.truncations.c_shift},
                    e.est_error});
  return r;
}

// ---------------------------------------------------------------- moments

Report moments_report(const RunConfig& cfg) {
  Report r;
  if (cfg.report == "chow-slattery") {
    const ChowSlatteryReport c = chow_slattery_report(cfg.base, cfg.n_max);
    r.name = "chow_slattery";
    r.meta = {{"kind", c.kind},          {"beta", c.beta},
              {"c", c.c},                {"sigma", c.sigma},
              {"psi_mean", c.psi_mean},  {"constant", c.constant},
              {"moment_k1_rhs", c.moment_k1.rhs_value}, {"moment_k2_rhs", c.moment_k2.rhs_value}};
    r.columns = {"n", "threshold", "log_lhs", "log_rhs", "gap", "gap_step", "normalized", "moment_k1", "moment_k2"};
    for (const auto& row : c.rows) {
      std::vector<Cell> cells{std::int64_t{row.n}, row.threshold, row.log_avg.lhs, row.log_avg.rhs,
                              row.gap,             row.gap_step,  row.normalized};
      for (const MomentReport* m : {&c.moment_k1, &c.moment_k2}) {
        Cell v = std::string();
        for (std::size_t i = 0; i < m->depths.size(); ++i)
          if (m->depths[i] == row.n) v = m->lhs_values[i];
        cells.push_back(v);
      }
      r.rows.push_back(std::move(cells));
    }
    return r;
  }
  const System sys = make_system(cfg);
  add_system_meta(r, sys);
  if (cfg.report == "log-average") {
    const double mean = psi_hat(sys.base.beta(), sys.digits, 0).real();
    r.name = "log_average";
    r.meta.emplace_back("psi_mean", mean);
    r.columns = {"n", "lhs", "rhs", "gap"};
    for (int n = 1; n <= cfg.n_max; ++n) {
      const LogAverage a = log_average(sys.base, sys.digits, cfg.x, n, mean);
      r.rows.push_back({std::int64_t{n}, a.lhs, a.rhs, a.lhs - a.rhs});
    }
    return r;
  }
  if (cfg.report != "moment") throw DomainError("--report must be moment, log-average or chow-slattery");
  const int depth = default_depth(cfg, sys.digits);
  const DensityProfile p = density_profile(sys.base, sys.digits, cfg.points, depth);
  const MomentReport m = moment_report(sys.base, sys.digits, cfg.k, cfg.x, cfg.depths, p);
  r.name = "moment";
  r.meta.emplace_back("profile_depth", std::int64_t{depth});
  r.meta.emplace_back("k", m.k);
  r.meta.emplace_back("x", m.x);
  r.meta.emplace_back("converging", std::int64_t{m.converging});
  r.columns = {"n", "lhs", "rhs", "relative_gap", "pre_asymptotic"};
  for (std::size_t i = 0; i < m.depths.size(); ++i)
    r.rows.push_back({std::int64_t{m.depths[i]}, m.lhs_values[i], m.rhs_value, m.relative_gaps[i],
                      std::int64_t{m.depths[i] < 4}});
  if (!m.converging && m.depths.size() >= 3)
    std::cerr << "warning: relative gaps do not decrease over the last three depths\n";
  return r;
}

// ---------------------------------------------------------------- figure1

void figure_panel(Report& r, char panel) {
  const BaseSequence base = panel == 'a' ? BaseSequence::geometric(3) : BaseSequence::central_binomial();
  const DigitSet digits = parse_digit_set(panel == 'a' ? "0,1,5" : "0,1,3");
  const int x0 = panel == 'a' ? 8 : 6;
  const double card = 3.0;
  const double kp = 0.9 * kappa(base.beta(), digits);
  std::vector<double> probe;
  for (int i = 0; i < 8; ++i) probe.push_back(i / 8.0);
  const double C = calibrate_error_constant(base, digits, probe, x0 + 2);
  for (int k = 0; k <= 1000; ++k) {
    const double x = x0 + k / 500.0;
    const int n = x0 + k / 500;
    const double frac = (k % 500) / 500.0;
    const double v = psi_scaling_value(base, digits, frac, n);
    r.rows.push_back({std::string(1, panel), x, v, std::int64_t{n}, C * std::pow(card, -kp * n)});
  }
}

Report figure1_report(const RunConfig& cfg) {
  Report r;
  r.name = "figure1";
  r.columns = {"panel", "x", "value", "depth", "error_bound"};
  if (cfg.panel && *cfg.panel != "a" && *cfg.panel != "b") throw DomainError("--panel must be a or b");
  if (!cfg.panel || *cfg.panel == "a") figure_panel(r, 'a');
  if (!cfg.panel || *cfg.panel == "b") figure_panel(r, 'b');
  return r;
}

}  // namespace

Report build_report(const RunConfig& cfg) {
  if (!(cfg.tol > 0)) throw DomainError("--tol must be positive");
  if (!(cfg.max_count >= 1)) throw DomainError("--max-count must be >= 1");
  if (cfg.depth && *cfg.depth < 1) throw DomainError("--depth must be >= 1");
  if (cfg.command == "count") return count_report(cfg);
  if (cfg.command == "density") return density_report(cfg);
  if (cfg.command == "fourier") return fourier_report(cfg);
  if (cfg.command == "coeffs") return coeffs_report(cfg);
  if (cfg.command == "zeta") return zeta_report(cfg);
  if (cfg.command == "moments") return moments_report(cfg);
  if (cfg.command == "figure1") return figure1_report(cfg);
  throw DomainError("unknown command '" + cfg.command + "'");
}

int run(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Generalized numeration systems: counts, density, Fourier data, zeta"};
  app.require_subcommand(1);

  auto system_opts = [&](CLI::App* sub) {
    sub->add_option("--base", cfg.base, "geometric|fibonacci|lucas|tau-floor:<tau>|central-binomial|table:<path>");
    sub->add_option("--beta", cfg.beta, "beta for a geometric base (3, 1.8, 9/5)");
    sub->add_option("--digits", cfg.digits, "digit set a,b,c containing 0");
  };
  auto common_opts = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "csv|json");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--depth", cfg.depth, "scaling depth n");
    sub->add_option("--max-count", cfg.max_count, "guard on table sizes and search nodes");
  };

  auto* count = app.add_subcommand("count", "r table or S queries");
  system_opts(count);
  common_opts(count);
  count->add_option("--upto", cfg.upto, "r(lambda) for lambda <= N");
  count->add_option("--at", cfg.at, "S(x) at these x")->delimiter(',');
  count->add_option("--lambda", cfg.lambda, "r at one value");

  auto* density = app.add_subcommand("density", "Psi profile on i / points");
  system_opts(density);
  common_opts(density);
  density->add_option("--points", cfg.points, "grid size");

  auto* fourier = app.add_subcommand("fourier", "Fourier coefficients of Psi");
  system_opts(fourier);
  common_opts(fourier);
  fourier->add_option("--kmax", cfg.kmax, "largest |k|");

  auto* coeffs = app.add_subcommand("coeffs", "L and c coefficients, sigma, rho");
  system_opts(coeffs);
  common_opts(coeffs);
  coeffs->add_option("--m", cfg.m, "largest index");

  auto* zeta = app.add_subcommand("zeta", "zeta(s), poles and special values");
  system_opts(zeta);
  common_opts(zeta);
  zeta->add_option("--s", cfg.s, "<re> or <re>,<im>")->allow_extra_args(false);
  zeta->add_option("--method", cfg.method, "auto|direct|geometric|perturbed");
  zeta->add_option("--X", cfg.X, "cut for the direct sum");
  zeta->add_option("--c-shift", cfg.c_shift, "cut point beta^{-c} of the geometric continuation");
  zeta->add_flag("--poles", cfg.poles, "pole grid");
  zeta->add_option("--jmax", cfg.jmax, "pole grid: largest j");
  zeta->add_option("--kmax", cfg.kmax, "pole grid: largest |k|");
  zeta->add_option("--special", cfg.special, "zeta(-n) for n <= N");

  auto* moments = app.add_subcommand("moments", "moment asymptotics and Chow-Slattery reports");
  system_opts(moments);
  common_opts(moments);
  moments->add_option("--report", cfg.report, "moment|log-average|chow-slattery");
  moments->add_option("--k", cfg.k, "moment order");
  moments->add_option("--x", cfg.x, "offset x");
  moments->add_option("--depths", cfg.depths, "depths n")->delimiter(',');
  moments->add_option("--points", cfg.points, "profile size");
  moments->add_option("--n-max", cfg.n_max, "largest n");

  auto* fig = app.add_subcommand("figure1", "Psi scaling panels (a) and (b) on fixed grids");
  common_opts(fig);
  fig->add_option("--panel", cfg.panel, "a|b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    const Format f = parse_format(cfg.format);
    emit(build_report(cfg), f, cfg.out);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace numsys::cli
