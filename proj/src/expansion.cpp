#include "pseudomode/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pseudomode/parallel.hpp"

namespace pm {

namespace {

constexpr int kMaxDerivs = 32;
constexpr double kDecayNodesPerUnit = 40.0;
constexpr int kTransitionNodes = 400;
constexpr int kPresample = 2001;

cplx ipow(cplx base, int e) {
  if (e == 0) return 1.0;
  if (e < 0) return 1.0 / ipow(base, -e);
  cplx r = 1.0;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Error-free sum a + b = s + err.
inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
}

struct DoubleDouble {
  cplx hi = 0.0, lo = 0.0;
  void add(cplx v) {
    double sr, er, si, ei;
    two_sum(hi.real(), v.real(), sr, er);
    two_sum(hi.imag(), v.imag(), si, ei);
    hi = {sr, si};
    lo += cplx(er, ei);
    // Renormalize so |lo| stays at the rounding level of hi.
    double nr, ni, lr, li;
    two_sum(hi.real(), lo.real(), nr, lr);
    two_sum(hi.imag(), lo.imag(), ni, li);
    hi = {nr, ni};
    lo = {lr, li};
  }
};

// Evaluates V, its derivatives up to max_order and the principal root of lambda - V at x.
struct PointEval {
  cplx derivs[kMaxDerivs];
  cplx res_sqrt;
};

void eval_point(const Potential& p, double x, int max_order, cplx lambda, PointEval& out) {
  p.eval_all(x, max_order, out.derivs);
  out.res_sqrt = principal_res_sqrt(lambda, out.derivs[0], x);
}

// Adaptive Simpson with Richardson correction on [a, b].
template <class F>
cplx simpson_adaptive(const F& fn, double a, double b, cplx fa, cplx fm, cplx fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const cplx flm = fn(0.5 * (a + m));
  const cplx frm = fn(0.5 * (m + b));
  const double h = b - a;
  const cplx whole = h / 6.0 * (fa + 4.0 * fm + fb);
  const cplx left = h / 12.0 * (fa + 4.0 * flm + fm);
  const cplx right = h / 12.0 * (fm + 4.0 * frm + fb);
  const cplx diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth <= 0) {
    std::ostringstream os;
    os << "adaptive Simpson did not converge on [" << a << ", " << b << "], error estimate " << std::abs(diff);
    throw Error(ErrorCode::quadrature_nonconvergence, os.str());
  }
  return simpson_adaptive(fn, a, m, fa, flm, fm, tol / 2.0, depth - 1) +
         simpson_adaptive(fn, m, b, fm, frm, fb, tol / 2.0, depth - 1);
}

// Integral of fn over [a, b] to relative tolerance rel_tol of the absolute-value integral.
template <class F>
cplx integrate_interval(const F& fn, double a, double b, cplx fa, cplx fb, double rel_tol) {
  if (a == b) return 0.0;
  const cplx fm = fn(0.5 * (a + b));
  const double scale = std::abs(b - a) * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb)) / 6.0;
  return simpson_adaptive(fn, a, b, fa, fm, fb, rel_tol * scale, 40);
}

// Cumulative integral of the integrand from base over sorted nodes, accumulated in double-double.
template <class F>
std::vector<DoubleDouble> cumulative_integral(const F& fn, double base, const std::vector<double>& nodes,
                                              double rel_tol, ExecPolicy policy) {
  const std::size_t count = nodes.size();
  std::vector<cplx> at_node(count);
  for_each_index(policy, count, [&](std::size_t i) { at_node[i] = fn(nodes[i]); });
  std::vector<cplx> increments(count > 0 ? count - 1 : 0);
  for_each_index(policy, increments.size(), [&](std::size_t i) {
    increments[i] = integrate_interval(fn, nodes[i], nodes[i + 1], at_node[i], at_node[i + 1], rel_tol);
  });

  std::size_t i0 = 0;
  for (std::size_t i = 1; i < count; ++i)
    if (std::abs(nodes[i] - base) < std::abs(nodes[i0] - base)) i0 = i;

  std::vector<DoubleDouble> out(count);
  if (count == 0) return out;
  if (nodes[i0] != base) out[i0].add(integrate_interval(fn, base, nodes[i0], fn(base), at_node[i0], rel_tol));
  for (std::size_t i = i0 + 1; i < count; ++i) {
    out[i] = out[i - 1];
    out[i].add(increments[i - 1]);
  }
  for (std::size_t i = i0; i-- > 0;) {
    out[i] = out[i + 1];
    out[i].add(-increments[i]);
  }
  return out;
}

// psi_0(x) = (1/4) log((lambda - V(x)) / (lambda - V(base))) continued along the nodes.
std::vector<cplx> psi_zero_closed_form(const Potential& p, cplx lambda, double base,
                                       const std::vector<double>& nodes, ExecPolicy policy) {
  const std::size_t count = nodes.size();
  const cplx res_base = lambda - p.eval(0, base);
  std::vector<cplx> raw(count);
  for_each_index(policy, count, [&](std::size_t i) { raw[i] = std::log((lambda - p.eval(0, nodes[i])) / res_base); });
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < count; ++i)
    if (std::abs(nodes[i] - base) < std::abs(nodes[i0] - base)) i0 = i;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto unwrap = [&](std::size_t i, std::size_t prev) {
    const double jump = raw[i].imag() - raw[prev].imag();
    raw[i] -= cplx(0.0, two_pi * std::round(jump / two_pi));
  };
  for (std::size_t i = i0 + 1; i < count; ++i) unwrap(i, i - 1);
  for (std::size_t i = i0; i-- > 0;) unwrap(i, i + 1);
  for (cplx& v : raw) v *= 0.25;
  return raw;
}

}  // namespace

TermSum scaled_exponent_derivative(int n, bool include_zero) {
  TermSum s;
  for (int k = -1; k <= n - 1; ++k) {
    if (k == 0 && !include_zero) continue;
    s += gen_psi_prime(k, n).shifted(-k, 0);
  }
  return s;
}

TermEvaluator::TermEvaluator(const TermSum& s) {
  bool first = true;
  for (const Term& t : s.terms()) {
    Item it;
    it.coeff = t.coeff.to_complex();
    it.factors = t.mono.factors;
    it.lam = t.lam_half_pow;
    it.res = t.res_half_pow;
    it.count = t.mono.count();
    max_order_ = std::max(max_order_, t.mono.max_order());
    if (first) {
      min_res_ = max_res_ = it.res;
      min_lam_ = max_lam_ = it.lam;
      first = false;
    }
    min_res_ = std::min(min_res_, it.res);
    max_res_ = std::max(max_res_, it.res);
    min_lam_ = std::min(min_lam_, it.lam);
    max_lam_ = std::max(max_lam_, it.lam);
    items_.push_back(std::move(it));
  }
}

cplx TermEvaluator::operator()(const cplx* derivs, cplx lambda_sqrt, cplx res_sqrt) const {
  cplx acc = 0.0;
  for (const Item& it : items_) {
    cplx v = it.coeff;
    for (const auto& [order, power] : it.factors) v *= ipow(derivs[order], power);
    if (it.lam) v *= ipow(lambda_sqrt, it.lam);
    if (it.res) v *= ipow(res_sqrt, it.res);
    acc += v;
  }
  return acc;
}

cplx TermEvaluator::eval_rescaled(const cplx* u_derivs, cplx z_sqrt, cplx zu_sqrt, double h, int extra_h_power) const {
  cplx acc = 0.0;
  for (const Item& it : items_) {
    cplx v = it.coeff;
    for (const auto& [order, power] : it.factors) v *= ipow(u_derivs[order], power);
    if (it.lam) v *= ipow(z_sqrt, it.lam);
    if (it.res) v *= ipow(zu_sqrt, it.res);
    v *= std::pow(h, extra_h_power - 2 * it.count - it.lam - it.res);
    acc += v;
  }
  return acc;
}

cplx principal_res_sqrt(cplx lambda, cplx v, double x) {
  const cplx d = lambda - v;
  if (d.real() < 0.0 && std::abs(d.imag()) <= 1e-12 * std::abs(d)) {
    std::ostringstream os;
    os << "lambda - V(x) = " << d << " on the negative real axis at x = " << x;
    throw Error(ErrorCode::branch_cut, os.str());
  }
  return std::sqrt(d);
}

cplx eval_termsum(const TermSum& s, const Potential& p, double x, cplx lambda) {
  TermEvaluator ev(s);
  PointEval pe;
  eval_point(p, x, ev.max_order(), lambda, pe);
  return ev(pe.derivs, std::sqrt(lambda), pe.res_sqrt);
}

std::vector<cplx> cumulative_psi(const Potential& p, cplx lambda, const ExpansionConfig& cfg, int k,
                                 const std::vector<double>& nodes) {
  const TermSum psi = gen_psi_prime(k, cfg.n);  // validates k
  const double base = cfg.base_point.value_or(0.0);
  if (k == 0) return psi_zero_closed_form(p, lambda, base, nodes, cfg.policy);
  const TermEvaluator ev(psi);
  const cplx lam_sqrt = std::sqrt(lambda);
  auto fn = [&](double x) {
    PointEval pe;
    eval_point(p, x, ev.max_order(), lambda, pe);
    return ev(pe.derivs, lam_sqrt, pe.res_sqrt);
  };
  auto dd = cumulative_integral(fn, base, nodes, cfg.quad_tol, cfg.policy);
  std::vector<cplx> out(dd.size());
  for (std::size_t i = 0; i < dd.size(); ++i) out[i] = dd[i].hi + dd[i].lo;
  return out;
}

const char* mode_name(ResidualMode m) {
  switch (m) {
    case ResidualMode::plain: return "plain";
    case ResidualMode::ignore_w: return "ignore_w";
    case ResidualMode::extra_term: return "extra_term";
    case ResidualMode::mollified: return "mollified";
  }
  return "?";
}

ResidualMode parse_mode(const std::string& s) {
  for (ResidualMode m : {ResidualMode::plain, ResidualMode::ignore_w, ResidualMode::extra_term, ResidualMode::mollified})
    if (s == mode_name(m)) return m;
  throw Error(ErrorCode::config_invalid, "unknown mode '" + s + "'");
}

cplx PseudomodeGrid::g(std::size_t i) const { return std::exp(log_g_hi[i]) * std::exp(log_g_lo[i]); }

cplx PseudomodeGrid::residual_factor(std::size_t i) const {
  cplx r = xi[i] * remainder[i] - xi_pp[i] + 2.0 * xi_p[i] * phi_prime[i];
  if (!extra_potential.empty()) r += xi[i] * extra_potential[i];
  return r;
}

std::vector<cplx> PseudomodeGrid::g_vals() const {
  std::vector<cplx> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = g(i);
  return v;
}

std::vector<cplx> PseudomodeGrid::f_vals() const {
  std::vector<cplx> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = f(i);
  return v;
}

std::vector<double> graded_grid(const Potential& p, cplx lambda, const CutoffSpec& spec, const ExpansionConfig& cfg,
                                const std::vector<ResolutionWindow>& extra_windows) {
  const double lo = spec.j_lo(), hi = spec.j_hi();
  const double width = hi - lo;
  std::vector<ResolutionWindow> windows = p.windows();
  windows.insert(windows.end(), extra_windows.begin(), extra_windows.end());

  std::vector<double> cuts = {lo, spec.jp_lo(), spec.center, spec.jp_hi(), hi};
  for (const auto& w : windows) {
    if (w.lo > lo && w.lo < hi) cuts.push_back(w.lo);
    if (w.hi > lo && w.hi < hi) cuts.push_back(w.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c < lo || c > hi; }), cuts.end());

  const std::size_t segs = cuts.size() - 1;
  std::vector<std::vector<double>> pieces(segs);
  for_each_index(cfg.policy, segs, [&](std::size_t s) {
    const double a = cuts[s], b = cuts[s + 1];
    const double len = b - a;
    if (len <= 0.0) return;
    std::vector<double> xs(kPresample), rate(kPresample), cum(kPresample, 0.0);
    for (int i = 0; i < kPresample; ++i) {
      xs[i] = a + len * i / (kPresample - 1);
      const cplx res = principal_res_sqrt(lambda, p.eval(0, xs[i]), xs[i]);
      rate[i] = kDecayNodesPerUnit * std::abs(res.imag());
    }
    for (int i = 1; i < kPresample; ++i) cum[i] = cum[i - 1] + 0.5 * (rate[i] + rate[i - 1]) * (xs[i] - xs[i - 1]);
    const double decay_nodes = cum.back();

    double required = cfg.min_nodes * len / width;
    const double mid = 0.5 * (a + b);
    if (mid < spec.jp_lo() || mid > spec.jp_hi()) required = std::max(required, double(kTransitionNodes));
    for (const auto& w : windows) {
      const double overlap = std::min(b, w.hi) - std::max(a, w.lo);
      if (overlap > 0.0 && w.hi > w.lo) required = std::max(required, w.min_nodes * overlap / (w.hi - w.lo));
    }
    const double base_count = std::max(decay_nodes, required);
    const double uniform = (base_count - decay_nodes) / len;
    long count = static_cast<long>(std::ceil(base_count * cfg.grid_refine));
    count = std::max(2L, count + (count % 2));

    // Equidistribute the density rate + uniform.
    for (int i = 0; i < kPresample; ++i) cum[i] += uniform * (xs[i] - a);
    const double total = cum.back();
    std::vector<double>& out = pieces[s];
    out.resize(count);
    int j = 1;
    for (long k = 0; k < count; ++k) {
      const double target = total * k / count;
      while (j < kPresample - 1 && cum[j] < target) ++j;
      const double c0 = cum[j - 1], c1 = cum[j];
      const double t = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
      out[k] = xs[j - 1] + std::clamp(t, 0.0, 1.0) * (xs[j] - xs[j - 1]);
    }
    out[0] = a;
  });
  std::vector<double> nodes;
  for (const auto& piece : pieces) nodes.insert(nodes.end(), piece.begin(), piece.end());
  nodes.push_back(hi);
  return nodes;
}

PseudomodeGrid assemble(const Potential& p, cplx lambda, const ExpansionConfig& cfg, const CutoffSpec& spec,
                        const AssembleOptions& opt) {
  const int n = cfg.n;
  if (n < 0) throw Error(ErrorCode::parameter_out_of_range, "n must be nonnegative");
  if (n + 1 > p.max_order()) {
    std::ostringstream os;
    os << "remainder r_" << n << " needs V^(" << n + 1 << "), potential supports order " << p.max_order();
    throw Error(ErrorCode::order_exceeds_max, os.str());
  }

  PseudomodeGrid grid;
  grid.lambda = lambda;
  grid.n = n;
  grid.mode = opt.mode;
  grid.cutoff = spec;
  grid.base_point = cfg.base_point.value_or(spec.center);
  grid.nodes = opt.explicit_nodes.empty() ? graded_grid(p, lambda, spec, cfg, opt.extra_windows) : opt.explicit_nodes;
  const std::size_t count = grid.nodes.size();
  const std::vector<double>& x = grid.nodes;
  const cplx lam_sqrt = std::sqrt(lambda);

  // Exponent: quadrature for k != 0, closed form for psi_0.
  const TermEvaluator integrand_ev(scaled_exponent_derivative(n, false));
  auto integrand = [&](double xx) {
    PointEval pe;
    eval_point(p, xx, integrand_ev.max_order(), lambda, pe);
    return integrand_ev(pe.derivs, lam_sqrt, pe.res_sqrt);
  };
  std::vector<DoubleDouble> phi = cumulative_integral(integrand, grid.base_point, x, cfg.quad_tol, cfg.policy);
  if (n >= 1) {
    const std::vector<cplx> psi0 = psi_zero_closed_form(p, lambda, grid.base_point, x, cfg.policy);
    for (std::size_t i = 0; i < count; ++i) phi[i].add(psi0[i]);
  }
  grid.log_g_hi.resize(count);
  grid.log_g_lo.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.log_g_hi[i] = -phi[i].hi;
    grid.log_g_lo[i] = -phi[i].lo;
  }

  if (opt.keep_psi) {
    ExpansionConfig c = cfg;
    c.base_point = grid.base_point;
    for (int k = -1; k <= n - 1; ++k) grid.psi_cumulative.push_back(cumulative_psi(p, lambda, c, k, x));
  }

  // Pointwise quantities.
  const TermSum rem = gen_remainder(n);
  TermSum head_sum;
  for (const Term& t : rem.terms())
    if (t.mono.factors.size() == 1 && t.mono.factors[0] == std::make_pair(n + 1, 1)) head_sum.add(t);
  const TermEvaluator rem_ev(rem), head_ev(head_sum), phi_ev(scaled_exponent_derivative(n, true));
  const int max_order = std::max({rem_ev.max_order(), phi_ev.max_order(), 0});

  grid.phi_prime.resize(count);
  grid.remainder.resize(count);
  grid.head.resize(count);
  grid.xi.resize(count);
  grid.xi_p.resize(count);
  grid.xi_pp.resize(count);
  const bool has_extra = static_cast<bool>(opt.extra_potential);
  if (has_extra) grid.extra_potential.resize(count);
  for_each_index(cfg.policy, count, [&](std::size_t i) {
    PointEval pe;
    eval_point(p, x[i], max_order, lambda, pe);
    grid.phi_prime[i] = phi_ev(pe.derivs, lam_sqrt, pe.res_sqrt);
    grid.remainder[i] = rem_ev(pe.derivs, lam_sqrt, pe.res_sqrt);
    grid.head[i] = head_ev.empty() ? cplx(0.0) : head_ev(pe.derivs, lam_sqrt, pe.res_sqrt);
    double b[3];
    bump_eval_all(spec, x[i], b);
    grid.xi[i] = b[0];
    grid.xi_p[i] = b[1];
    grid.xi_pp[i] = b[2];
    if (has_extra) grid.extra_potential[i] = opt.extra_potential(x[i]);
  });
  return grid;
}

}  // namespace pm
