#include "pseudomode/mollify.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

namespace pm {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

double bump_unnormalized(double t) {
  const double u = 1.0 - t * t;
  return u > 0.0 ? std::exp(-1.0 / u) : 0.0;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk_panel(const std::function<double(double)>& fn, double a, double b) {
  double err = 0.0;
  const double val = GK::integrate(fn, a, b, 0, 0.0, &err);
  return {a, b, val, err};
}

// Global adaptive Gauss-Kronrod: splits the worst panel until the summed error meets the budget.
double adapt(const std::function<double(double)>& fn, const std::vector<double>& edges, double budget) {
  std::priority_queue<Panel> panels;
  double total = 0.0, error = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (!(edges[k + 1] > edges[k])) continue;
    Panel p = gk_panel(fn, edges[k], edges[k + 1]);
    total += p.value;
    error += p.error;
    panels.push(p);
  }
  constexpr int kMaxSplits = 4000;
  for (int split = 0; split < kMaxSplits && error > budget && !panels.empty(); ++split) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    const Panel left = gk_panel(fn, worst.a, mid), right = gk_panel(fn, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  return total;
}

double integrate_piece(const std::function<double(double)>& fn, double a, double b, double tol) {
  if (b <= a) return 0.0;
  double err = 0.0;
  return GK::integrate(fn, a, b, 20, tol, &err);
}

std::vector<double> sorted_cuts(std::vector<double> cuts, double lo, double hi) {
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return !(c > lo && c < hi); }), cuts.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

double mollifier_mass_constant() {
  static const double z = integrate_piece(bump_unnormalized, -1.0, 1.0, 1e-14);
  return z;
}

double mollifier(double t, int order) {
  const double u = 1.0 - t * t;
  if (u <= 0.0) return 0.0;
  const double phi = std::exp(-1.0 / u) / mollifier_mass_constant();
  switch (order) {
    case 0: return phi;
    case 1: return phi * (-2.0 * t / (u * u));
    case 2: return phi * (4.0 * t * t / (u * u * u * u) - 2.0 / (u * u) - 8.0 * t * t / (u * u * u));
    default: throw Error(ErrorCode::unsupported_order, "mollifier derivatives are available up to order 2");
  }
}

double mollifier_l1(int order) {
  static const double norms[3] = {
      integrate_split([](double t) { return std::abs(mollifier(t, 0)); }, -1.0, 1.0, {}, 1e-13),
      integrate_split([](double t) { return std::abs(mollifier(t, 1)); }, -1.0, 1.0, {0.0}, 1e-13),
      integrate_split([](double t) { return std::abs(mollifier(t, 2)); }, -1.0, 1.0,
                      {-0.5, 0.0, 0.5}, 1e-13),
  };
  if (order < 0 || order > 2) throw Error(ErrorCode::unsupported_order, "mollifier derivatives are available up to order 2");
  return norms[order];
}

double MollifySpec::eps_minus(double lambda) const { return std::pow(lambda, -alpha_minus); }
double MollifySpec::eps_plus(double lambda) const { return std::pow(lambda, -alpha_plus); }
double MollifySpec::eps_zero(double lambda) const { return std::pow(lambda, -alpha_zero); }

double integrate_split(const std::function<double(double)>& fn, double lo, double hi, std::vector<double> cuts,
                       double tol, double abs_tol) {
  cuts = sorted_cuts(std::move(cuts), lo, hi);
  cuts.insert(cuts.begin(), lo);
  cuts.push_back(hi);
  // The error budget is global: tol times a coarse estimate of the L1 mass, never below abs_tol.
  double scale = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    if (cuts[k + 1] > cuts[k])
      scale += GK::integrate([&](double x) { return std::abs(fn(x)); }, cuts[k], cuts[k + 1], 0);
  const double budget = std::max(abs_tol, tol * scale);
  if (!(budget > 0.0)) return 0.0;
  return adapt(fn, cuts, budget);
}

cplx convolve(const ScalarField& w, const BreakpointFn& breakpoints, double eps, double x, int order) {
  if (!(eps > 0.0)) throw Error(ErrorCode::parameter_out_of_range, "mollification scale must be positive");
  // Substituting y = eps s: integral over s in (-1, 1) of w^(order)(s) W(x - eps s) ds / eps^order.
  std::vector<double> cuts;
  for (double b : breakpoints(x - eps, x + eps)) cuts.push_back((x - b) / eps);
  const double scale = std::pow(eps, -order);
  const double re = integrate_split([&](double s) { return mollifier(s, order) * w(x - eps * s).real(); }, -1.0, 1.0,
                                    cuts, 1e-12, 1e-15);
  const double im = integrate_split([&](double s) { return mollifier(s, order) * w(x - eps * s).imag(); }, -1.0, 1.0,
                                    cuts, 1e-12, 1e-15);
  return scale * cplx(re, im);
}

double lp_norm(const ScalarField& w, const BreakpointFn& breakpoints, double p, double lo, double hi) {
  const double s = integrate_split([&](double x) { return std::pow(std::abs(w(x)), p); }, lo, hi, breakpoints(lo, hi));
  return std::pow(s, 1.0 / p);
}

double modulus_continuity(const ScalarField& w, const BreakpointFn& breakpoints, double eps, double p, double lo,
                          double hi) {
  double best = 0.0;
  for (double frac : {1.0, 0.5, 0.25, 0.125})
    for (double sign : {-1.0, 1.0}) {
      const double t = sign * frac * eps;
      std::vector<double> cuts = breakpoints(lo, hi);
      for (double b : breakpoints(lo + t, hi + t)) cuts.push_back(b - t);
      const double s = integrate_split([&](double x) { return std::pow(std::abs(w(x + t) - w(x)), p); }, lo, hi, cuts);
      best = std::max(best, std::pow(s, 1.0 / p));
    }
  return best;
}

MollifiedPotential::MollifiedPotential(const SingularSplit& split, double lambda, const MollifySpec& spec)
    : Potential([&] {
        PotentialMeta m = split.v_regular->meta();
        m.name = "mollified(" + split.name + ")";
        m.max_order = 2;
        return m;
      }()),
      split_(split),
      eps_minus_(spec.eps_minus(lambda)),
      eps_plus_(spec.eps_plus(lambda)),
      eps_zero_(spec.eps_zero(lambda)) {
  if (!split.w2.identically_zero && split.w2.support) {
    const auto [lo, hi] = *split.w2.support;
    for (double b : split.w2.breakpoints(lo - 1.0, hi + 1.0))
      windows_.push_back({b - 2.0 * eps_zero_, b + 2.0 * eps_zero_, 400});
  }
}

cplx MollifiedPotential::w_tilde(double x, int m) const {
  cplx acc = 0.0;
  if (!split_.w1.identically_zero) {
    const auto& w1 = split_.w1;
    auto with_zero = [&](double lo, double hi) {
      std::vector<double> b = w1.breakpoints(lo, hi);
      if (lo < 0.0 && 0.0 < hi) b.push_back(0.0);
      std::sort(b.begin(), b.end());
      return b;
    };
    if (x - eps_minus_ < 0.0) {
      ScalarField left = [&](double y) { return y < 0.0 ? w1.eval(y) : cplx(0.0); };
      acc += convolve(left, with_zero, eps_minus_, x, m);
    }
    if (x + eps_plus_ > 0.0) {
      ScalarField right = [&](double y) { return y > 0.0 ? w1.eval(y) : cplx(0.0); };
      acc += convolve(right, with_zero, eps_plus_, x, m);
    }
  }
  if (!split_.w2.identically_zero) {
    bool hit = true;
    if (split_.w2.support) hit = x + eps_zero_ > split_.w2.support->first && x - eps_zero_ < split_.w2.support->second;
    if (hit) acc += convolve(split_.w2.eval, split_.w2.breakpoints, eps_zero_, x, m);
  }
  return acc;
}

void MollifiedPotential::eval_impl(double x, int m_max, cplx* out) const {
  if (m_max > 2) throw Error(ErrorCode::unsupported_order, "mollified parts support derivative orders up to 2");
  split_.v_regular->eval_all(x, m_max, out);
  for (int m = 0; m <= m_max; ++m) out[m] += w_tilde(x, m);
}

std::shared_ptr<const MollifiedPotential> mollified_potential(const SingularSplit& split, double lambda,
                                                              const MollifySpec& spec) {
  for (double a : {spec.alpha_minus, spec.alpha_plus, spec.alpha_zero})
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::parameter_out_of_range, "mollification exponents must lie in (0, 1)");
  return std::make_shared<MollifiedPotential>(split, lambda, spec);
}

}  // namespace pm
