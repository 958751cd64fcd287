#include "pseudomode/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pseudomode/parallel.hpp"

namespace pm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_window(double a, std::pair<double, double> window, double b) {
  if (window.first >= window.second)
    throw Error(ErrorCode::empty_window, "admissible a-window is empty at b = " + fmt(b));
  if (a < window.first || a > window.second)
    throw Error(ErrorCode::exponent_outside_window, "a = " + fmt(a) + " outside [" + fmt(window.first) + ", " +
                                                        fmt(window.second) + "] at b = " + fmt(b));
}

}  // namespace

std::pair<double, double> admissible_a_range(const Potential& p, double b, double x_b, double delta) {
  const PotentialMeta& m = p.meta();
  const double nu = m.nu_plus, eps1 = m.eps1;
  double re_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double x = x_b - delta + 2.0 * delta * i / 200.0;
    if (p.in_domain(x)) re_max = std::max(re_max, p.eval(0, x).real());
  }
  const double ax = std::abs(x_b);
  const double lo = std::pow(b, 2.0 / 3.0) * std::pow(ax, 2.0 * nu / 3.0) + std::max(re_max, 0.0);
  const double hi = b * b * std::pow(ax, -4.0 * nu - 4.0 * eps1 - 2.0);
  if (lo >= hi) throw Error(ErrorCode::empty_window, "admissible a-window is empty at b = " + fmt(b));
  return {lo, hi};
}

std::pair<double, double> admissible_a_range_singular(double alpha, double b, double eps) {
  const double lo = std::pow(b, (2.0 / 3.0) * (1.0 + 1.0 / alpha) + eps);
  const double hi = std::pow(b, 2.0 * (1.0 - 1.0 / alpha) - eps);
  if (lo >= hi) throw Error(ErrorCode::empty_window, "singular a-window is empty at b = " + fmt(b));
  return {lo, hi};
}

std::pair<double, double> decaying_width_window(double gamma, double p) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::invalid_regime_params, "decaying regime needs 0 < gamma < 1");
  const double lo = 1.0 / (2.0 * (1.0 - gamma));
  const double hi = p / gamma;
  if (!(lo < hi))
    throw Error(ErrorCode::invalid_regime_params,
                "no width exponent q with " + fmt(lo) + " < q < " + fmt(hi) + " for b = a^-" + fmt(p));
  return {lo, hi};
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) throw Error(ErrorCode::invalid_regime_params, "invalid log-spaced range");
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (int i = 0; i < count; ++i) v[i] = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
  return v;
}

std::vector<double> path_abscissae(const PathParams& params) {
  if (params.values.empty()) return log_spaced(params.lo, params.hi, params.count);
  for (double v : params.values)
    if (!(v > 0.0)) throw Error(ErrorCode::invalid_regime_params, "path values must be positive");
  std::vector<double> v = params.values;
  std::sort(v.begin(), v.end());
  return v;
}

LambdaPath make_path(Regime regime, const Potential& p, const PathParams& params, double alpha) {
  LambdaPath path;
  path.regime = regime;
  path.params = params;
  switch (regime) {
    case Regime::real_axis:
      for (double lam : path_abscissae(params)) {
        PathPoint pt;
        pt.lambda = lam;
        pt.a = lam;
        pt.cutoff = widths_real_axis(p, lam, params.widths);
        path.points.push_back(pt);
      }
      break;
    case Regime::curve:
    case Regime::singular:
      for (double b : path_abscissae(params)) {
        PathPoint pt;
        pt.b = b;
        pt.a = std::pow(b, params.exponent);
        pt.lambda = cplx(pt.a, b);
        pt.cutoff = widths_curve(p, b, regime);
        pt.x_b = pt.cutoff.x_b;
        const auto window = regime == Regime::curve
                                ? admissible_a_range(p, b, *pt.x_b, pt.cutoff.delta_plus)
                                : admissible_a_range_singular(alpha, b, params.sing_eps);
        check_window(pt.a, window, b);
        path.points.push_back(pt);
      }
      break;
    case Regime::decaying: {
      if (!p.meta().gamma_im || *p.meta().gamma_im >= 0.0)
        throw Error(ErrorCode::invalid_regime_params, "decaying regime needs a decaying potential");
      const double gamma = -*p.meta().gamma_im;
      const auto [qlo, qhi] = decaying_width_window(gamma, params.exponent);
      path.decay_width_exponent = 0.5 * (qlo + qhi);
      for (double a : path_abscissae(params)) {
        PathPoint pt;
        pt.a = a;
        pt.b = std::pow(a, -params.exponent);
        pt.lambda = cplx(pt.a, pt.b);
        pt.cutoff = symmetric_cutoff(Regime::decaying, 0.0, std::pow(a, path.decay_width_exponent));
        path.points.push_back(pt);
      }
      break;
    }
    case Regime::semiclassical: {
      if (params.h_values.size() < 1) throw Error(ErrorCode::invalid_regime_params, "semiclassical path needs h values");
      if (!(params.sc_eps >= 0.0 && params.sc_eps < 1.0))
        throw Error(ErrorCode::invalid_regime_params, "semiclassical width exponent must lie in [0, 1)");
      std::vector<double> hs = params.h_values;
      std::sort(hs.begin(), hs.end(), std::greater<>());
      for (double h : hs) {
        if (!(h > 0.0)) throw Error(ErrorCode::invalid_regime_params, "h must be positive");
        PathPoint pt;
        pt.h = h;
        pt.lambda = params.z / (h * h);
        pt.a = pt.lambda.real();
        pt.b = pt.lambda.imag();
        pt.cutoff = symmetric_cutoff(Regime::semiclassical, params.x0, std::pow(h, 0.5 * (1.0 - params.sc_eps)));
        path.points.push_back(pt);
      }
      break;
    }
  }
  return path;
}

std::vector<PseudomodeGrid> assemble_on_path(const LambdaPath& path, const SweepSetup& setup, ExecPolicy policy) {
  if ((setup.mode == ResidualMode::ignore_w || setup.mode == ResidualMode::mollified) && !setup.split)
    throw Error(ErrorCode::invalid_regime_params, std::string(mode_name(setup.mode)) + " mode needs a singular split");
  if (setup.mode == ResidualMode::mollified && setup.cfg.n > 1)
    throw Error(ErrorCode::unsupported_order, "mollified mode supports n <= 1");

  std::vector<PseudomodeGrid> grids(path.points.size());
  for_each_task(policy, path.points.size(), [&](std::size_t i) {
    const PathPoint& pt = path.points[i];
    ExpansionConfig cfg = setup.cfg;
    cfg.base_point = pt.cutoff.center;
    if (policy == ExecPolicy::serial) cfg.policy = ExecPolicy::serial;
    AssembleOptions opt;
    opt.mode = setup.mode;
    PotentialPtr pot = setup.potential;
    if (path.regime == Regime::semiclassical) pot = make_scaled(setup.potential, 1.0 / (*pt.h * *pt.h));

    if (setup.mode == ResidualMode::ignore_w || setup.mode == ResidualMode::mollified) {
      const SingularSplit& split = *setup.split;
      const double lo = pt.cutoff.j_lo(), hi = pt.cutoff.j_hi();
      for (double b : split.w_breakpoints(lo, hi)) opt.extra_windows.push_back({b, b, 0});
      if (setup.mode == ResidualMode::ignore_w) {
        opt.extra_potential = [split](double x) { return split.w_total(x); };
      } else {
        auto moll = mollified_potential(split, std::abs(pt.lambda), setup.mollify);
        if (!split.w1.identically_zero) {
          const double e = std::max(moll->eps_minus(), moll->eps_plus());
          for (double b : split.w1.breakpoints(lo, hi)) opt.extra_windows.push_back({b - 2.0 * e, b + 2.0 * e, 100});
        }
        opt.extra_potential = [split, moll](double x) { return split.w_total(x) - moll->w_tilde(x, 0); };
        pot = moll;
      }
    }
    grids[i] = assemble(*pot, pt.lambda, cfg, pt.cutoff, opt);
  });
  return grids;
}

std::vector<ResidualReport> report_path(const LambdaPath& path, const std::vector<PseudomodeGrid>& grids,
                                        ExecPolicy policy) {
  std::vector<ResidualReport> out(grids.size());
  for (std::size_t i = 0; i < grids.size(); ++i) {
    out[i] = report(grids[i], policy);
    if (i < path.points.size()) out[i].h = path.points[i].h;
  }
  return out;
}

double semiclassical_log_ratio(const PseudomodeGrid& grid, const Potential& u, cplx z, double h) {
  const TermEvaluator rem_ev(gen_remainder(grid.n)), phi_ev(scaled_exponent_derivative(grid.n, true));
  const int max_order = std::max(rem_ev.max_order(), phi_ev.max_order());
  const cplx z_sqrt = std::sqrt(z);
  const std::size_t count = grid.size();
  std::vector<double> mag(count), mag_f(count), log_g(count);
  for (std::size_t i = 0; i < count; ++i) {
    cplx d[32];
    u.eval_all(grid.nodes[i], max_order, d);
    const cplx zu_sqrt = principal_res_sqrt(z, d[0], grid.nodes[i]);
    const cplx h2_rem = rem_ev.eval_rescaled(d, z_sqrt, zu_sqrt, h, 2);
    const cplx phi_prime = phi_ev.eval_rescaled(d, z_sqrt, zu_sqrt, h, 0);
    const cplx factor = grid.xi[i] * h2_rem - h * h * grid.xi_pp[i] + 2.0 * h * h * grid.xi_p[i] * phi_prime;
    mag[i] = std::abs(factor);
    mag_f[i] = std::abs(grid.xi[i]);
    log_g[i] = grid.log_abs_g(i);
  }
  const std::vector<double> w = simpson_weights(grid.nodes);
  return log_l2_norm(grid.nodes, w, mag, log_g, ExecPolicy::serial) -
         log_l2_norm(grid.nodes, w, mag_f, log_g, ExecPolicy::serial);
}

}  // namespace pm
