#include "pseudomode/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "pseudomode/curves.hpp"
#include "pseudomode/mollify.hpp"
#include "pseudomode/oracle.hpp"
#include "pseudomode/symbolic_wkb.hpp"

namespace pm {

namespace {

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GaussianRational q(long re_num, long re_den, long im_num = 0, long im_den = 1) {
  return GaussianRational::from_ints(re_num, re_den, im_num, im_den);
}

Monomial mono(std::initializer_list<std::pair<int, int>> factors) {
  Monomial m;
  m.factors.assign(factors.begin(), factors.end());
  return m;
}

// Real-axis stand-ins for i x^gamma: odd imaginary part so that Im V changes sign.
struct PolynomialCase {
  double gamma;
  const char* name;
  double eps1;
};
constexpr PolynomialCase kPolynomialCases[] = {
    {1.0, "monomial_imag", 1.2},
    {2.0, "poly_like", 1.6},
    {3.0, "monomial_imag", 2.2},
};

const PolynomialCase& polynomial_case(double gamma) {
  for (const auto& c : kPolynomialCases)
    if (c.gamma == gamma) return c;
  throw Error(ErrorCode::parameter_out_of_range, "no polynomial case for this gamma");
}

PotentialPtr polynomial_potential(double gamma) {
  const PolynomialCase& c = polynomial_case(gamma);
  Params p;
  p.scalars["gamma"] = gamma;
  return make_builtin(c.name, p);
}

struct Sweep {
  std::vector<ResidualReport> reports;
  double seconds = 0.0;
};

// The gamma sweeps feed criteria 4, 5 and 7.
const Sweep& polynomial_sweep(double gamma) {
  static std::mutex mu;
  static std::map<double, Sweep> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(gamma);
  if (it != cache.end()) return it->second;
  const auto t0 = std::chrono::steady_clock::now();
  PotentialPtr pot = polynomial_potential(gamma);
  PathParams pp;
  pp.lo = 1e2;
  pp.hi = 1e5;
  pp.count = 8;
  pp.widths.eps1 = polynomial_case(gamma).eps1;
  const LambdaPath path = make_path(Regime::real_axis, *pot, pp);
  SweepSetup setup;
  setup.potential = pot;
  setup.cfg.n = 2;
  Sweep s;
  s.reports = report_path(path, assemble_on_path(path, setup));
  s.seconds = seconds_since(t0);
  return cache.emplace(gamma, std::move(s)).first->second;
}

CriterionResult symbolic_exactness() {
  CriterionResult r{1, "symbolic exactness of r_0, r_1, r_2", true, {}};
  const auto t0 = std::chrono::steady_clock::now();
  TermSum r0 = TermSum::single(q(0, 1, -1, 2), mono({{1, 1}}), 0, -1);
  TermSum r1;
  r1.add(q(-1, 4), mono({{2, 1}}), 0, -2);
  r1.add(q(-5, 16), mono({{1, 2}}), 0, -4);
  TermSum r2;
  r2.add(q(0, 1, 1, 8), mono({{3, 1}}), 0, -3);
  r2.add(q(0, 1, 9, 16), mono({{1, 1}, {2, 1}}), 0, -5);
  r2.add(q(0, 1, 15, 32), mono({{1, 3}}), 0, -7);
  r2.add(q(1, 64), mono({{2, 2}}), 0, -6);
  r2.add(q(5, 128), mono({{1, 2}, {2, 1}}), 0, -8);
  r2.add(q(25, 1024), mono({{1, 4}}), 0, -10);
  const TermSum expected[] = {r0, r1, r2};
  for (int n = 0; n <= 2; ++n) {
    const TermSum got = gen_remainder(n);
    const bool ok = got == expected[n];
    r.pass = r.pass && ok;
    r.details.push_back(format("r_%d: %zu terms, %s", n, got.size(), ok ? "exact match" : "MISMATCH"));
    if (!ok) r.details.push_back(got.to_string());
  }
  const double secs = seconds_since(t0);
  r.pass = r.pass && secs < 1.0;
  r.details.push_back(format("runtime %.3f s (limit 1 s)", secs));
  return r;
}

CriterionResult term_structure() {
  CriterionResult r{2, "structure of psi_k^(m) and constant-monomial exclusion", true, {}};
  const auto t0 = std::chrono::steady_clock::now();
  int checked = 0;
  for (int k = -1; k <= 4; ++k)
    for (int m = 1; m <= 6 - k; ++m) {
      const StructureReport rep = structure_check(gen_psi_derivative(k, m, 5), k, m);
      ++checked;
      if (!rep.ok) {
        r.pass = false;
        r.details.push_back(format("k=%d m=%d: %s", k, m, rep.violations.front().c_str()));
      }
    }
  for (int n = 0; n <= 5; ++n) {
    const StructureReport rep = remainder_shape_check(gen_remainder(n), n);
    ++checked;
    if (!rep.ok) {
      r.pass = false;
      r.details.push_back(format("r_%d: %s", n, rep.violations.front().c_str()));
    }
  }
  const double secs = seconds_since(t0);
  r.pass = r.pass && secs < 5.0;
  r.details.push_back(format("%d sums checked, runtime %.3f s (limit 5 s)", checked, secs));
  return r;
}

CriterionResult constant_potential() {
  CriterionResult r{3, "constant potential gives an exact WKB solution", true, {}};
  Params p;
  p.scalars["re"] = 3.0;
  p.scalars["im"] = 2.0;
  PotentialPtr pot = make_builtin("constant", p);
  const double lambda = 100.0;
  const CutoffSpec spec = symmetric_cutoff(Regime::real_axis, 0.0, 4.0);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int n = 0; n <= 6; ++n) {
    ExpansionConfig cfg;
    cfg.n = n;
    const PseudomodeGrid grid = assemble(*pot, lambda, cfg, spec);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid.nodes[i] >= spec.jp_lo() && grid.nodes[i] <= spec.jp_hi()) {
        sup = std::max(sup, std::abs(grid.residual_integrand(i)));
        ++checked;
      }
    worst = std::max(worst, sup);
  }
  r.pass = checked > 0 && worst <= 1e-10;
  r.details.push_back(format("V = 3+2i, lambda = 100, n = 0..6: sup |residual| over %zu plateau nodes = %.3e (limit 1e-10)",
                             checked, worst));
  return r;
}

CriterionResult polynomial_rates() {
  CriterionResult r{4, "polynomial rates, sigma slope in [-1.65, -1.35]", true, {}};
  for (const auto& c : kPolynomialCases) {
    const Sweep& s = polynomial_sweep(c.gamma);
    const RateFit fit = rate_fit(s.reports, ReportField::sigma);
    const bool ok = fit.slope >= -1.65 && fit.slope <= -1.35;
    r.pass = r.pass && ok;
    r.details.push_back(format("gamma=%g (%s, eps1=%g): sigma slope %.4f, target -1.5, fit rms %.2e, %d points%s, %.1f s",
                               c.gamma, c.name, c.eps1, fit.slope, fit.residual_of_fit, fit.points_used,
                               fit.transient_dropped ? " (transient dropped)" : "", s.seconds));
  }
  return r;
}

CriterionResult cutoff_negligibility() {
  CriterionResult r{5, "cut-off term negligible against the remainder", true, {}};
  for (const auto& c : kPolynomialCases) {
    const Sweep& s = polynomial_sweep(c.gamma);
    const ResidualReport& last = s.reports.back();
    const double log_ratio = last.log_kappa - last.log_sigma;
    const RateFit kappa = rate_fit(s.reports, ReportField::kappa);
    const RateFit sigma = rate_fit(s.reports, ReportField::sigma);
    const bool ok = log_ratio < std::log(1e-3) && kappa.slope <= 3.0 * sigma.slope;
    r.pass = r.pass && ok;
    r.details.push_back(format("gamma=%g: log10(kappa/sigma) at lambda=1e5 = %.1f, kappa slope %.2f vs 3 x sigma slope %.2f",
                               c.gamma, log_ratio / std::log(10.0), kappa.slope, 3.0 * sigma.slope));
  }
  return r;
}

CriterionResult discontinuous_potential() {
  CriterionResult r{6, "i sgn(x): ignore-W and mollified slopes", true, {}};
  const SingularSplit split = split_singular("sgn_imag_split", Params{});
  PathParams pp;
  pp.lo = 1e2;
  pp.hi = 1e5;
  pp.count = 8;
  pp.widths.eps2 = 1.0;
  const LambdaPath path = make_path(Regime::real_axis, *split.v_regular, pp);
  double slopes[2] = {0.0, 0.0};
  const ResidualMode modes[2] = {ResidualMode::ignore_w, ResidualMode::mollified};
  for (int i = 0; i < 2; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepSetup setup;
    setup.potential = split.v_regular;
    setup.split = split;
    setup.mode = modes[i];
    setup.cfg.n = 1;
    const auto reports = report_path(path, assemble_on_path(path, setup));
    const RateFit fit = rate_fit(reports, ReportField::ratio);
    slopes[i] = fit.slope;
    r.details.push_back(format("%s (n=1, eps2=1): ratio slope %.4f, fit rms %.2e, %.1f s", mode_name(modes[i]),
                               fit.slope, fit.residual_of_fit, seconds_since(t0)));
  }
  const bool ignore_ok = slopes[0] >= -0.35 && slopes[0] <= -0.15;
  const bool moll_ok = slopes[1] >= -0.60 && slopes[1] <= -0.40;
  r.pass = ignore_ok && moll_ok && slopes[1] < slopes[0];
  r.details.push_back(format("ignore-W in [-0.35, -0.15]: %s; mollified in [-0.60, -0.40]: %s; mollified steeper: %s",
                             ignore_ok ? "yes" : "no", moll_ok ? "yes" : "no", slopes[1] < slopes[0] ? "yes" : "no"));
  return r;
}

CriterionResult lp_scaling() {
  CriterionResult r{7, "L2 norm of f scales as lambda^{1/(4(gamma+1))}", true, {}};
  for (double gamma : {1.0, 2.0}) {
    const RateFit fit = rate_fit(polynomial_sweep(gamma).reports, ReportField::f_norm);
    const double target = 1.0 / (4.0 * (gamma + 1.0));
    const bool ok = std::abs(fit.slope - target) <= 0.05;
    r.pass = r.pass && ok;
    r.details.push_back(format("gamma=%g: ||f|| slope %.4f, target %.4f", gamma, fit.slope, target));
  }
  return r;
}

struct RoughCase {
  const char* name;
  ScalarField w;
  BreakpointFn breakpoints;
  double lo, hi;
};

// Cuts at every breakpoint b and at b +- eps, where the mollified function changes character.
std::vector<double> band_cuts(const BreakpointFn& bp, double eps, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (double b : bp(lo - eps, hi + eps))
    for (double c : {b - eps, b, b + eps})
      if (c > lo && c < hi) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ||F||_p on [lo, hi] by 20-point Gauss panels no longer than max_panel between consecutive cuts.
double panel_lp_norm(const ScalarField& fn, const std::vector<double>& cuts, double p, double max_panel) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
    const double step = (b - a) / panels;
    for (int j = 0; j < panels; ++j)
      acc += boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double x) { return std::pow(std::abs(fn(x)), p); }, a + j * step, a + (j + 1) * step);
  }
  return std::pow(acc, 1.0 / p);
}

CriterionResult mollifier_inequalities() {
  CriterionResult r{8, "mollifier inequalities and the sgn modulus", true, {}};
  const SingularSplit sgn = split_singular("sgn_imag_split", Params{});
  Params fp;
  fp.scalars["gamma"] = 1.0;
  const SingularSplit floor = split_singular("floor_steps", fp);
  const std::vector<RoughCase> cases = {
      {"i sgn eta", sgn.w2.eval, sgn.w2.breakpoints, -1.0, 1.0},
      {"floor-step W1", floor.w1.eval, floor.w1.breakpoints, 1.5, 5.5},
      {"hat", [](double x) { return cplx(std::max(0.0, 1.0 - std::abs(x)), 0.0); },
       [](double lo, double hi) {
         std::vector<double> out;
         for (double b : {-1.0, 0.0, 1.0})
           if (b > lo && b < hi) out.push_back(b);
         return out;
       },
       -2.0, 2.0},
  };
  const double slack = 1.01, w1 = mollifier_l1(1);
  int checked = 0, failed = 0;
  for (const RoughCase& c : cases)
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const ScalarField smooth = [&](double x) { return convolve(c.w, c.breakpoints, eps, x, 0); };
      const ScalarField smooth_d = [&](double x) { return convolve(c.w, c.breakpoints, eps, x, 1); };
      const ScalarField diff = [&](double x) { return c.w(x) - smooth(x); };
      const std::vector<double> cuts = band_cuts(c.breakpoints, eps, c.lo, c.hi);
      const double panel = std::min(0.05, eps);
      double sup = 0.0;
      for (int i = 0; i <= 2000; ++i) sup = std::max(sup, std::abs(smooth(c.lo + (c.hi - c.lo) * i / 2000.0)));
      for (double b : cuts) sup = std::max(sup, std::abs(smooth(b)));
      for (double p : {2.0, 4.0}) {
        const double phi_wide = lp_norm(c.w, c.breakpoints, p, c.lo - eps, c.hi + eps);
        const double omega = modulus_continuity(c.w, c.breakpoints, eps, p, c.lo, c.hi);
        const double lhs[4] = {panel_lp_norm(smooth, cuts, p, panel), sup, panel_lp_norm(diff, cuts, p, panel),
                               panel_lp_norm(smooth_d, cuts, p, panel)};
        const double rhs[4] = {phi_wide, std::pow(eps, -1.0 / p) * phi_wide, omega, omega * w1 / eps};
        for (int k = 0; k < 4; ++k) {
          ++checked;
          if (!(lhs[k] <= slack * rhs[k])) {
            ++failed;
            r.details.push_back(format("%s eps=%g p=%g inequality %d: %.4e > %.4e", c.name, eps, p, k + 1, lhs[k], rhs[k]));
          }
        }
      }
    }
  r.details.push_back(format("%d of %d inequalities hold with 1%% slack", checked - failed, checked));
  const ScalarField isgn = [](double x) { return cplx(0.0, x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0)); };
  const BreakpointFn zero = [](double lo, double hi) {
    return lo < 0.0 && 0.0 < hi ? std::vector<double>{0.0} : std::vector<double>{};
  };
  bool modulus_ok = true;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double ratio = modulus_continuity(isgn, zero, eps, 2.0, -1.0, 1.0) / std::sqrt(eps);
    modulus_ok = modulus_ok && std::abs(ratio - 2.0) <= 0.04;
    r.details.push_back(format("omega_2(%g; sgn)/sqrt(eps) = %.6f (target 2)", eps, ratio));
  }
  r.pass = failed == 0 && modulus_ok;
  return r;
}

CriterionResult curve_regime() {
  CriterionResult r{9, "curve regime lambda = b + ib for V = i x^2", true, {}};
  const auto t0 = std::chrono::steady_clock::now();
  Params p;
  p.scalars["gamma"] = 2.0;
  PotentialPtr pot = make_builtin("monomial_imag", p);
  PathParams pp;
  pp.lo = 1e2;
  pp.hi = std::pow(10.0, 4.5);
  pp.count = 8;
  pp.exponent = 1.0;
  const LambdaPath path = make_path(Regime::curve, *pot, pp);
  SweepSetup setup;
  setup.potential = pot;
  setup.cfg.n = 3;
  const auto reports = report_path(path, assemble_on_path(path, setup));
  bool monotone = true;
  for (std::size_t i = 1; i < reports.size(); ++i) monotone = monotone && reports[i].log_ratio < reports[i - 1].log_ratio;
  std::vector<double> lb, lr;
  double xb_err = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    lb.push_back(std::log(path.points[i].b));
    lr.push_back(reports[i].log_ratio);
    xb_err = std::max(xb_err, std::abs(*path.points[i].x_b / std::sqrt(path.points[i].b) - 1.0));
  }
  const RateFit fit = rate_fit(lb, lr);
  r.pass = monotone && fit.slope <= -0.4 && xb_err <= 1e-8;
  r.details.push_back(format("n=3, b in [1e2, 10^4.5]: ratio %.3e -> %.3e, monotone %s", reports.front().ratio,
                             reports.back().ratio, monotone ? "yes" : "no"));
  r.details.push_back(format("slope vs b %.4f (limit -0.4); max |x_b/sqrt(b) - 1| = %.2e; %.1f s", fit.slope, xb_err,
                             seconds_since(t0)));
  return r;
}

CriterionResult strong_singularity() {
  CriterionResult r{10, "strong singularity i/|x|^3 with a = b^1.1", true, {}};
  PotentialPtr pot = make_builtin("inv_singularity", Params{});
  PathParams pp;
  pp.lo = 1e3;
  pp.hi = 1e6;
  pp.count = 8;
  pp.exponent = 1.1;
  const LambdaPath path = make_path(Regime::singular, *pot, pp);
  SweepSetup setup;
  setup.potential = pot;
  setup.cfg.n = 3;
  const auto reports = report_path(path, assemble_on_path(path, setup));
  const double drop = std::exp(reports.front().log_ratio - reports.back().log_ratio);
  r.pass = drop >= 10.0;
  r.details.push_back(format("n=3, b in [1e3, 1e6]: ratio %.3e -> %.3e, decrease factor %.3g (need >= 10)",
                             reports.front().ratio, reports.back().ratio, drop));
  r.details.push_back(format("at b=1e6: kappa %.3e, sigma %.3e", reports.back().kappa, reports.back().sigma));
  return r;
}

CriterionResult oracle_agreement() {
  CriterionResult r{11, "finite-difference oracle agrees with the analytic ratio", true, {}};
  for (double gamma : {1.0, 2.0})
    for (double lambda : {1e2, 1e3}) {
      PotentialPtr pot = polynomial_potential(gamma);
      const CutoffSpec spec = widths_real_axis(*pot, lambda);
      bool compared = false;
      for (int n : {2, 1}) {
        ExpansionConfig cfg;
        cfg.n = n;
        const ResidualReport rep = report(assemble(*pot, lambda, cfg, spec));
        const double h = oracle_step(lambda, rep.ratio);
        const OracleCheck oc = oracle_cross_check(*pot, lambda, cfg, spec, h, rep.ratio);
        if (oc.floor_limited) continue;
        compared = true;
        const bool sigma_ok = oc.sigma_min <= oc.disc_ratio_h && oc.sigma_min <= oc.disc_ratio_half &&
                              oc.sigma_min <= oc.disc_ratio_richardson;
        const bool ok = oc.relative_gap <= 0.1 && sigma_ok;
        r.pass = r.pass && ok;
        r.details.push_back(format("gamma=%g lambda=%g n=%d: analytic %.5e, extrapolated %.5e, gap %.2e, floor %.1e, "
                                   "sigma_min %.3e%s",
                                   gamma, lambda, n, rep.ratio, oc.disc_ratio_richardson, oc.relative_gap,
                                   oc.floor_estimate, oc.sigma_min, sigma_ok ? "" : " (ABOVE residual)"));
        break;
      }
      if (!compared) {
        r.pass = false;
        r.details.push_back(format("gamma=%g lambda=%g: floor-limited for n = 1 and 2", gamma, lambda));
      }
    }
  Params zero;
  const DiscreteOperator a = discretize(*make_builtin("constant", zero), 0.0, std::numbers::pi, std::numbers::pi / 1000.0);
  const double ground = sigma_min_probe(a, 0.0, 1e-12, 2000).sigma_min;
  const bool ground_ok = std::abs(ground - 1.0) <= 1e-5;
  r.pass = r.pass && ground_ok;
  r.details.push_back(format("V=0 Dirichlet on (0, pi), h = pi/1000: ground state %.9f (|err| %.1e)", ground,
                             std::abs(ground - 1.0)));
  return r;
}

CriterionResult g_envelope() {
  CriterionResult r{12, "two-sided envelope of |g|", true, {}};
  const double gamma = 2.0, lambda = 1e4;
  PotentialPtr pot = polynomial_potential(gamma);
  WidthOptions wo;
  wo.eps1 = polynomial_case(gamma).eps1;
  const CutoffSpec spec = widths_real_axis(*pot, lambda, wo);
  const PseudomodeGrid grid = assemble(*pot, lambda, ExpansionConfig{}, spec);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t used = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = std::abs(grid.nodes[i]);
    if (x < 1.0) continue;
    // Integral of |t| <t> from 0 to x.
    const double big_lambda = (std::pow(1.0 + x * x, 1.5) - 1.0) / 3.0 / std::sqrt(lambda);
    const double ratio = grid.log_abs_g(i) / big_lambda;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ++used;
  }
  const double c1 = -lo, c2 = -hi;
  r.pass = used > 0 && c2 > 0.0 && c2 <= c1 && c1 <= 5.0;
  r.details.push_back(format("i x<x> at lambda=1e4, %zu nodes with |x| >= 1 in [%.1f, %.1f]: C1 = %.4f, C2 = %.4f",
                             used, spec.j_lo(), spec.j_hi(), c1, c2));
  return r;
}

CriterionResult semiclassical_mapping() {
  CriterionResult r{13, "semiclassical mapping for U = ix, z = 1", true, {}};
  Params p;
  p.scalars["gamma"] = 1.0;
  PotentialPtr u = make_builtin("monomial_imag", p);
  PathParams pp;
  pp.z = 1.0;
  pp.x0 = 0.0;
  for (int k = 3; k <= 10; ++k) pp.h_values.push_back(std::ldexp(1.0, -k));
  const LambdaPath path = make_path(Regime::semiclassical, *u, pp);
  SweepSetup setup;
  setup.potential = u;
  setup.cfg.n = 2;
  const auto grids = assemble_on_path(path, setup);
  const auto reports = report_path(path, grids);
  double worst = 0.0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const double h = *path.points[i].h;
    const double log_h_ratio = semiclassical_log_ratio(grids[i], *u, pp.z, h);
    worst = std::max(worst, std::abs(std::expm1(log_h_ratio - reports[i].log_ratio - 2.0 * std::log(h))));
    lx.push_back(-std::log(h));
    ly.push_back(log_h_ratio);
  }
  const RateFit fit = rate_fit(lx, ly);
  r.pass = worst <= 1e-12 && fit.slope <= -0.5;
  r.details.push_back(format("h = 2^-3..2^-10: max |h-residual / (h^2 scaled residual) - 1| = %.2e (limit 1e-12)", worst));
  r.details.push_back(format("slope of log ratio vs log(1/h) %.4f (limit -0.5)", fit.slope));
  return r;
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"symbolic", "envelopes", "rates", "mollify", "curves", "oracle"};
  return names;
}

std::vector<int> suite_criteria(const std::string& suite) {
  static const std::map<std::string, std::vector<int>> table = {
      {"symbolic", {1, 2, 3}}, {"envelopes", {12}}, {"rates", {4, 5, 6, 7, 13}},
      {"mollify", {8}},        {"curves", {9, 10}}, {"oracle", {11}},
  };
  auto it = table.find(suite);
  if (it == table.end()) throw Error(ErrorCode::unknown_suite, "unknown suite '" + suite + "'");
  return it->second;
}

CriterionResult run_criterion(int id) {
  static const std::function<CriterionResult()> table[kCriterionCount] = {
      symbolic_exactness, term_structure,   constant_potential, polynomial_rates,       cutoff_negligibility,
      discontinuous_potential, lp_scaling,     mollifier_inequalities, curve_regime,        strong_singularity,
      oracle_agreement,   g_envelope,          semiclassical_mapping,
  };
  if (id < 1 || id > kCriterionCount) throw Error(ErrorCode::parameter_out_of_range, "criterion id out of range");
  try {
    return table[id - 1]();
  } catch (const std::exception& e) {
    return CriterionResult{id, "criterion " + std::to_string(id), false, {std::string("error: ") + e.what()}};
  }
}

SuiteResult run_suite(const std::string& suite) {
  SuiteResult out;
  out.suite = suite;
  for (int id : suite_criteria(suite)) out.criteria.push_back(run_criterion(id));
  return out;
}

}  // namespace pm
