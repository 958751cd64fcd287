#include "pseudomode/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pseudomode/bump.hpp"
#include "pseudomode/jet.hpp"

namespace pm {

namespace {

constexpr int kSmoothMaxOrder = 11;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Builtin defined by a generic functor mapping a Jet in x to (Re V, Im V) jets.
template <class F>
class JetPotential final : public Potential {
 public:
  JetPotential(PotentialMeta meta, F f, std::vector<ResolutionWindow> win = {})
      : Potential(std::move(meta)), f_(std::move(f)), windows_(std::move(win)) {}

  std::vector<ResolutionWindow> windows() const override { return windows_; }

 protected:
  void eval_impl(double x, int m_max, cplx* out) const override {
    if (m_max < 3)
      run<3>(x, m_max, out);
    else
      run<kSmoothMaxOrder + 1>(x, m_max, out);
  }

 private:
  template <int N>
  void run(double x, int m_max, cplx* out) const {
    auto [re, im] = f_(Jet<N>::variable(x));
    for (int m = 0; m <= m_max; ++m) out[m] = cplx(re.derivative(m), im.derivative(m));
  }

  F f_;
  std::vector<ResolutionWindow> windows_;
};

template <class F>
PotentialPtr make_jet(PotentialMeta meta, F f, std::vector<ResolutionWindow> win = {}) {
  return std::make_shared<JetPotential<F>>(std::move(meta), std::move(f), std::move(win));
}

// Polynomial sum_k coeffs[k] x^k with exact derivatives.
class PolynomialPotential final : public Potential {
 public:
  PolynomialPotential(PotentialMeta meta, std::vector<cplx> coeffs)
      : Potential(std::move(meta)), coeffs_(std::move(coeffs)) {}

 protected:
  void eval_impl(double x, int m_max, cplx* out) const override {
    const int deg = static_cast<int>(coeffs_.size()) - 1;
    for (int m = 0; m <= m_max; ++m) {
      cplx acc = 0.0;
      for (int k = deg; k >= m; --k) {
        double falling = 1.0;
        for (int i = 0; i < m; ++i) falling *= (k - i);
        acc = acc * x + coeffs_[k] * falling;
      }
      out[m] = acc;
    }
  }

 private:
  std::vector<cplx> coeffs_;
};

class ScaledPotential final : public Potential {
 public:
  ScaledPotential(PotentialMeta meta, PotentialPtr base, double factor)
      : Potential(std::move(meta)), base_(std::move(base)), factor_(factor) {}
  std::vector<ResolutionWindow> windows() const override { return base_->windows(); }

 protected:
  void eval_impl(double x, int m_max, cplx* out) const override {
    base_->eval_all(x, m_max, out);
    for (int m = 0; m <= m_max; ++m) out[m] *= factor_;
  }

 private:
  PotentialPtr base_;
  double factor_;
};

template <class J>
J zero_like(const J&) {
  return J::constant(0.0);
}

PotentialMeta base_meta(const std::string& name) {
  PotentialMeta m;
  m.name = name;
  m.max_order = kSmoothMaxOrder;
  return m;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::parameter_out_of_range, what);
}

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

PotentialPtr monomial_imag(const Params& p) {
  const double gamma = p.get("gamma", 1.0);
  require(gamma >= 0.0, "monomial_imag requires gamma >= 0");
  PotentialMeta m = base_meta("monomial_imag");
  m.bounded_minus = m.bounded_plus = (gamma == 0.0);
  m.gamma_im = gamma;
  m.gamma_pm = std::make_pair(gamma, gamma);
  if (is_integer(gamma)) {
    const int g = static_cast<int>(std::round(gamma));
    std::vector<cplx> c(g + 1, 0.0);
    c[g] = cplx(0.0, 1.0);
    return std::make_shared<PolynomialPotential>(m, c);
  }
  m.domain = Domain::half_line_positive;
  return make_jet(m, [gamma](const auto& x) { return std::make_pair(zero_like(x), pow(x, gamma)); });
}

PotentialPtr poly_like(const Params& p) {
  const double gamma = p.get("gamma", 1.0);
  require(gamma >= 0.0, "poly_like requires gamma >= 0");
  const bool has_re = p.has("beta");
  const double beta = p.get("beta", 0.0);
  const double re_coeff = p.get("re_coeff", 1.0);
  PotentialMeta m = base_meta("poly_like");
  m.gamma_im = gamma;
  m.gamma_pm = std::make_pair(gamma, gamma);
  if (has_re) m.beta_re = beta;
  const bool bounded = gamma == 0.0 && (!has_re || beta <= 0.0);
  m.bounded_minus = m.bounded_plus = bounded;
  std::vector<ResolutionWindow> win{{-2.0, 2.0, 200}};
  return make_jet(
      m,
      [=](const auto& x) {
        auto bracket = 1.0 + x * x;
        auto im = x * pow(bracket, 0.5 * (gamma - 1.0));
        auto re = has_re ? re_coeff * pow(bracket, 0.5 * beta) : zero_like(x);
        return std::make_pair(re, im);
      },
      win);
}

PotentialPtr cosh_sinh(const Params&) {
  PotentialMeta m = base_meta("cosh_sinh");
  m.nu_minus = m.nu_plus = 0.0;
  return make_jet(m, [](const auto& x) {
    auto sh = x, ch = x;
    sinhcosh(x, sh, ch);
    return std::make_pair(ch, sh);
  });
}

PotentialPtr arctan_imag(const Params&) {
  PotentialMeta m = base_meta("arctan_imag");
  m.nu_minus = m.nu_plus = -2.0;
  m.bounded_minus = m.bounded_plus = true;
  m.gamma_im = 0.0;
  m.gamma_pm = std::make_pair(0.0, 0.0);
  return make_jet(m, [](const auto& x) { return std::make_pair(zero_like(x), atan(x)); });
}

PotentialPtr arctan_plus_sin(const Params& p) {
  const double mu = p.get("mu", 0.5);
  require(mu > 0.0 && mu < 1.0, "arctan_plus_sin requires 0 < mu < 1");
  PotentialMeta m = base_meta("arctan_plus_sin");
  m.nu_minus = m.nu_plus = mu;
  m.bounded_minus = m.bounded_plus = true;
  m.eps2 = std::min(0.25, 0.5 * (1.0 - mu));
  m.gamma_im = 0.0;
  m.gamma_pm = std::make_pair(0.0, 0.0);
  return make_jet(m, [mu](const auto& x) {
    auto im = 2.0 * atan(x) + sin(pow(1.0 + x * x, 0.5 * (1.0 + mu)));
    return std::make_pair(zero_like(x), im);
  });
}

PotentialPtr decaying(const Params& p) {
  const double gamma = p.get("gamma", 0.5);
  require(gamma > 0.0 && gamma < 1.0, "decaying requires 0 < gamma < 1");
  PotentialMeta m = base_meta("decaying");
  m.bounded_minus = m.bounded_plus = true;
  m.gamma_im = -gamma;
  return make_jet(m, [gamma](const auto& x) {
    return std::make_pair(zero_like(x), x * pow(1.0 + x * x, -0.5 * (1.0 + gamma)));
  });
}

PotentialPtr inv_singularity(const Params& p) {
  const double alpha = p.get("alpha", 3.0);
  const double c = p.get("c", 0.0);
  require(alpha > 2.0, "inv_singularity requires alpha > 2");
  PotentialMeta m = base_meta("inv_singularity");
  m.domain = Domain::half_line_negative;
  return make_jet(m, [alpha, c](const auto& x) {
    auto t = -x;
    auto re = c == 0.0 ? zero_like(x) : c * pow(t, -2.0);
    return std::make_pair(re, pow(t, -alpha));
  });
}

PotentialPtr constant(const Params& p) {
  PotentialMeta m = base_meta("constant");
  m.max_order = 16;
  m.bounded_minus = m.bounded_plus = true;
  m.gamma_im = 0.0;
  return std::make_shared<PolynomialPotential>(m, std::vector<cplx>{cplx(p.get("re", 0.0), p.get("im", 0.0))});
}

PotentialPtr custom_polynomial(const Params& p) {
  if (p.coeffs.empty()) throw Error(ErrorCode::parameter_out_of_range, "custom_polynomial needs coefficients");
  PotentialMeta m = base_meta("custom_polynomial");
  m.max_order = 16;
  const bool bounded = p.coeffs.size() == 1;
  m.bounded_minus = m.bounded_plus = bounded;
  return std::make_shared<PolynomialPotential>(m, p.coeffs);
}

PotentialPtr sgn_regular() {
  PotentialMeta m = base_meta("sgn_imag_split");
  m.nu_minus = m.nu_plus = -2.0;
  m.bounded_minus = m.bounded_plus = true;
  m.gamma_im = 0.0;
  m.gamma_pm = std::make_pair(0.0, 0.0);
  return make_jet(
      m,
      [](const auto& x) {
        auto one_minus_eta = 1.0 - plateau(x, 0.5, 1.0);
        auto im = x.c[0] < 0.0 ? -one_minus_eta : one_minus_eta;
        return std::make_pair(zero_like(x), im);
      },
      {{-1.0, 1.0, 400}});
}

PotentialPtr floor_regular(double gamma) {
  PotentialMeta m = base_meta("floor_steps");
  m.gamma_im = gamma;
  m.gamma_pm = std::make_pair(gamma, gamma);
  const double inner = gamma + 1.0, outer = gamma + 2.0;
  return make_jet(
      m,
      [=](const auto& x) {
        if (std::abs(x.c[0]) <= inner) return std::make_pair(zero_like(x), zero_like(x));
        auto one_minus_eta = 1.0 - plateau(x, inner, outer);
        auto im = x.c[0] > 0.0 ? one_minus_eta * pow(x, gamma) : -(one_minus_eta * pow(-x, gamma));
        return std::make_pair(zero_like(x), im);
      },
      {{-outer, outer, 400}});
}

std::vector<double> integers_in(double lo, double hi, double min_abs, double max_abs) {
  std::vector<double> out;
  for (double k = std::ceil(lo); k < hi; k += 1.0) {
    if (k <= lo) continue;
    const double a = std::abs(k);
    if (a >= min_abs && a <= max_abs) out.push_back(k);
  }
  return out;
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::full_line: return "full-line";
    case Domain::half_line_positive: return "half-line-positive";
    case Domain::half_line_negative: return "half-line-negative";
  }
  return "?";
}

bool Potential::in_domain(double x) const {
  if (!std::isfinite(x)) return false;
  switch (meta_.domain) {
    case Domain::full_line: return true;
    case Domain::half_line_positive: return x > 0.0;
    case Domain::half_line_negative: return x < 0.0;
  }
  return false;
}

cplx Potential::eval(int m, double x) const {
  cplx buf[32];
  eval_all(x, m, buf);
  return buf[m];
}

void Potential::eval_all(double x, int m_max, cplx* out) const {
  if (m_max < 0 || m_max > meta_.max_order) {
    std::ostringstream os;
    os << "order " << m_max << " exceeds max order " << meta_.max_order << " of " << meta_.name;
    throw Error(ErrorCode::order_exceeds_max, os.str());
  }
  if (!in_domain(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside " << domain_name(meta_.domain) << " domain of " << meta_.name;
    throw Error(ErrorCode::point_outside_domain, os.str());
  }
  eval_impl(x, m_max, out);
}

double Params::get(const std::string& key, double fallback) const {
  auto it = scalars.find(key);
  return it == scalars.end() ? fallback : it->second;
}

cplx SingularSplit::w_total(double x) const {
  cplx v = 0.0;
  if (!w1.identically_zero) v += w1.eval(x);
  if (!w2.identically_zero) v += w2.eval(x);
  return v;
}

std::vector<double> SingularSplit::w_breakpoints(double lo, double hi) const {
  std::vector<double> b;
  if (!w1.identically_zero) {
    auto b1 = w1.breakpoints(lo, hi);
    b.insert(b.end(), b1.begin(), b1.end());
  }
  if (!w2.identically_zero) {
    auto b2 = w2.breakpoints(lo, hi);
    b.insert(b.end(), b2.begin(), b2.end());
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double eta_plateau(double x, double inner, double outer) {
  return plateau(Jet<1>::constant(x), inner, outer).c[0];
}

std::vector<std::string> builtin_names() {
  return {"monomial_imag", "poly_like",     "cosh_sinh",       "arctan_imag",
          "arctan_plus_sin", "sgn_imag_split", "floor_steps",   "decaying",
          "inv_singularity", "constant",      "custom_polynomial"};
}

PotentialPtr make_builtin(const std::string& name, const Params& params) {
  if (name == "monomial_imag") return monomial_imag(params);
  if (name == "poly_like") return poly_like(params);
  if (name == "cosh_sinh") return cosh_sinh(params);
  if (name == "arctan_imag") return arctan_imag(params);
  if (name == "arctan_plus_sin") return arctan_plus_sin(params);
  if (name == "decaying") return decaying(params);
  if (name == "inv_singularity") return inv_singularity(params);
  if (name == "constant") return constant(params);
  if (name == "custom_polynomial") return custom_polynomial(params);
  if (name == "sgn_imag_split" || name == "floor_steps") return split_singular(name, params).v_regular;
  throw Error(ErrorCode::unknown_name, "unknown potential '" + name + "'");
}

SingularSplit split_singular(const std::string& name, const Params& params) {
  SingularSplit s;
  s.name = name;
  if (name == "sgn_imag_split") {
    s.v_regular = sgn_regular();
    s.w1.identically_zero = true;
    s.w1.eval = [](double) { return cplx(0.0); };
    s.w1.breakpoints = [](double, double) { return std::vector<double>{}; };
    s.w2.eval = [](double x) { return cplx(0.0, eta_plateau(x, 0.5, 1.0) * sgn(x)); };
    s.w2.breakpoints = [](double lo, double hi) {
      return lo < 0.0 && 0.0 < hi ? std::vector<double>{0.0} : std::vector<double>{};
    };
    s.w2.support = std::make_pair(-1.0, 1.0);
    s.margin_eps = 0.5;
    return s;
  }
  if (name == "floor_steps") {
    const double gamma = params.get("gamma", 1.0);
    require(gamma > 0.0, "floor_steps requires gamma > 0");
    const double inner = gamma + 1.0, outer = gamma + 2.0;
    s.v_regular = floor_regular(gamma);
    s.w1.eval = [=](double x) {
      const double ax = std::abs(x);
      if (ax <= inner) return cplx(0.0);
      const double w = (1.0 - eta_plateau(x, inner, outer)) * (std::pow(std::floor(ax), gamma) - std::pow(ax, gamma));
      return cplx(0.0, w * sgn(x));
    };
    s.w1.breakpoints = [=](double lo, double hi) { return integers_in(lo, hi, inner, kInf); };
    s.w1.beta_minus = s.w1.beta_plus = gamma - 1.0;
    s.w1.gamma_minus = s.w1.gamma_plus = -kInf;
    s.w2.eval = [=](double x) {
      const double ax = std::abs(x);
      if (ax >= outer) return cplx(0.0);
      return cplx(0.0, eta_plateau(x, inner, outer) * std::pow(std::floor(ax), gamma) * sgn(x));
    };
    s.w2.breakpoints = [=](double lo, double hi) { return integers_in(lo, hi, 1.0, outer); };
    s.w2.support = std::make_pair(-outer, outer);
    s.margin_eps = 1.0 / (gamma + 1.0);
    return s;
  }
  throw Error(ErrorCode::unknown_name, "unknown split '" + name + "'");
}

PotentialPtr make_scaled(PotentialPtr base, double factor) {
  PotentialMeta m = base->meta();
  std::ostringstream os;
  os << "scaled(" << m.name << "," << factor << ")";
  m.name = os.str();
  return std::make_shared<ScaledPotential>(m, std::move(base), factor);
}

}  // namespace pm
