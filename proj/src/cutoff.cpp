#include "pseudomode/cutoff.hpp"

#include <cmath>
#include <sstream>

#include "pseudomode/bump.hpp"

namespace pm {

namespace {

double japanese(double x) { return std::sqrt(1.0 + x * x); }

// Scans d = 1, 2, 4, ... until F(d) >= target, then bisects back to relative 1e-10.
template <class F>
double first_crossing(F defining, double target, const std::string& what) {
  double lo = 0.0, hi = 1.0;
  int doublings = 0;
  while (defining(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) throw Error(ErrorCode::no_crossing, what);
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (defining(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::real_axis: return "real_axis";
    case Regime::curve: return "curve";
    case Regime::decaying: return "decaying";
    case Regime::singular: return "singular";
    case Regime::semiclassical: return "semiclassical";
  }
  return "?";
}

Regime parse_regime(const std::string& s) {
  for (Regime r : {Regime::real_axis, Regime::curve, Regime::decaying, Regime::singular, Regime::semiclassical})
    if (s == regime_name(r)) return r;
  throw Error(ErrorCode::config_invalid, "unknown regime '" + s + "'");
}

CutoffSpec widths_real_axis(const Potential& p, double lambda, const WidthOptions& opt) {
  const PotentialMeta& m = p.meta();
  if (m.domain != Domain::full_line)
    throw Error(ErrorCode::invalid_regime_params, "real-axis widths need a full-line potential");
  if (!(lambda > 0.0)) throw Error(ErrorCode::parameter_out_of_range, "real-axis lambda must be positive");
  const double eps1 = opt.eps1.value_or(m.eps1);
  const double eps2 = opt.eps2.value_or(m.eps2);

  CutoffSpec s;
  s.regime = Regime::real_axis;
  auto side = [&](double sign, bool bounded, double nu, double& delta, double& Delta, std::string& rule) {
    if (bounded) {
      delta = std::pow(lambda, 0.5 * (1.0 + eps2));
      Delta = delta / 4.0;
      rule = "bounded-side";
      return;
    }
    auto defining = [&](double d) {
      const double im = p.eval(0, sign * d).imag();
      return im * im / std::pow(japanese(d), 4.0 * nu + 2.0 * eps1 + 2.0);
    };
    std::ostringstream os;
    os << "no width crossing for lambda = " << lambda << " on the " << (sign > 0 ? "right" : "left");
    delta = first_crossing(defining, lambda, os.str());
    Delta = std::pow(delta, -nu) / 4.0;
    rule = "first-crossing";
  };
  side(-1.0, m.bounded_minus, m.nu_minus, s.delta_minus, s.Delta_minus, s.rule_minus);
  side(+1.0, m.bounded_plus, m.nu_plus, s.delta_plus, s.Delta_plus, s.rule_plus);
  if (s.Delta_minus >= s.delta_minus || s.Delta_plus >= s.delta_plus)
    throw Error(ErrorCode::no_crossing, "lambda below threshold: transition width exceeds half-width");
  return s;
}

double turning_point(const Potential& p, double b) {
  auto im = [&](double x) { return p.eval(0, x).imag(); };
  double lo, hi;
  if (p.meta().domain == Domain::half_line_negative) {
    // Im V increases toward 0 from the left.
    hi = -1.0;
    int steps = 0;
    while (im(hi) < b) {
      hi *= 0.5;
      if (++steps > 200) throw Error(ErrorCode::no_crossing, "Im V never reaches b");
    }
    lo = 2.0 * hi;
    steps = 0;
    while (im(lo) >= b) {
      hi = lo;
      lo *= 2.0;
      if (++steps > 200) throw Error(ErrorCode::non_monotone_tail, "Im V does not fall below b");
    }
  } else {
    lo = p.meta().domain == Domain::half_line_positive ? 0.5 : 0.0;
    hi = 1.0;
    int steps = 0;
    while (im(hi) < b) {
      lo = hi;
      hi *= 2.0;
      if (++steps > 200) throw Error(ErrorCode::no_crossing, "Im V never reaches b");
    }
  }
  if (!(im(lo) <= b && im(hi) >= b)) throw Error(ErrorCode::non_monotone_tail, "invalid turning-point bracket");
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::abs(hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (im(mid) < b ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  // Monotone tail check on a few points of the bracket neighbourhood.
  const double step = std::max(1e-3 * std::abs(x), 1e-12);
  if (im(x + step) < im(x - step)) throw Error(ErrorCode::non_monotone_tail, "Im V decreasing at the turning point");
  return x;
}

CutoffSpec widths_curve(const Potential& p, double b, Regime regime) {
  CutoffSpec s;
  s.regime = regime;
  const double xb = turning_point(p, b);
  s.x_b = xb;
  s.center = xb;
  double delta;
  if (regime == Regime::singular) {
    delta = std::abs(xb) / 2.0;
  } else {
    if (xb <= 0.0) throw Error(ErrorCode::non_monotone_tail, "turning point must lie on the positive tail");
    delta = std::pow(xb, -p.meta().nu_plus) / 2.0;
  }
  s.delta_minus = s.delta_plus = delta;
  s.Delta_minus = s.Delta_plus = delta / 4.0;
  s.rule_minus = s.rule_plus = "turning-point";
  return s;
}

CutoffSpec symmetric_cutoff(Regime regime, double center, double delta) {
  CutoffSpec s;
  s.regime = regime;
  s.center = center;
  s.delta_minus = s.delta_plus = delta;
  s.Delta_minus = s.Delta_plus = delta / 4.0;
  return s;
}

void bump_eval_all(const CutoffSpec& spec, double x, double out[3]) {
  using J = Jet<3>;
  const J t_left = (J::variable(x) - J::constant(spec.j_lo())) * (1.0 / spec.Delta_minus);
  const J t_right = (J::constant(spec.j_hi()) - J::variable(x)) * (1.0 / spec.Delta_plus);
  const J xi = smooth_step(t_left) * smooth_step(t_right);
  for (int k = 0; k < 3; ++k) out[k] = xi.derivative(k);
}

double bump_eval(const CutoffSpec& spec, double x, int order) {
  if (order < 0 || order > 2) throw Error(ErrorCode::unsupported_order, "bump derivatives are available up to order 2");
  double v[3];
  bump_eval_all(spec, x, v);
  return v[order];
}

}  // namespace pm
