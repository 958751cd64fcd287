#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pseudomode/potentials.hpp"

namespace pm {

using ScalarField = std::function<cplx(double)>;
using BreakpointFn = std::function<std::vector<double>(double, double)>;

// w(t) = exp(-1/(1 - t^2)) / Z on (-1, 1), normalized to unit mass.
double mollifier(double t, int order = 0);  // order 0, 1, 2
double mollifier_mass_constant();           // Z
double mollifier_l1(int order);             // ||w^(order)||_1

struct MollifySpec {
  double alpha_minus = 0.5, alpha_plus = 0.5, alpha_zero = 0.5;
  double eps_minus(double lambda) const;
  double eps_plus(double lambda) const;
  double eps_zero(double lambda) const;
};

// (w_eps^(order) * W)(x), splitting the window at W's breakpoints.
cplx convolve(const ScalarField& w, const BreakpointFn& breakpoints, double eps, double x, int order = 0);

// ||W||_{L^p(lo, hi)} by adaptive quadrature split at the breakpoints.
double lp_norm(const ScalarField& w, const BreakpointFn& breakpoints, double p, double lo, double hi);

// sup over t in +-{eps, eps/2, eps/4, eps/8} of ||W(. + t) - W||_{L^p(lo, hi)}.
double modulus_continuity(const ScalarField& w, const BreakpointFn& breakpoints, double eps, double p, double lo,
                          double hi);

// Integral over [lo, hi] split at the given cuts by adaptive Gauss-Kronrod. The error target is
// max(abs_tol, tol * coarse L1 mass) on the summed panel error.
double integrate_split(const std::function<double(double)>& fn, double lo, double hi, std::vector<double> cuts,
                       double tol = 1e-11, double abs_tol = 0.0);

// V~ = V + (chi_- W1)^{eps_-} + (chi_+ W1)^{eps_+} + W2^{eps_0}, derivatives up to order 2.
class MollifiedPotential final : public Potential {
 public:
  MollifiedPotential(const SingularSplit& split, double lambda, const MollifySpec& spec);

  // W~^(m)(x), the mollified rough part alone.
  cplx w_tilde(double x, int m = 0) const;
  double eps_minus() const { return eps_minus_; }
  double eps_plus() const { return eps_plus_; }
  double eps_zero() const { return eps_zero_; }
  std::vector<ResolutionWindow> windows() const override { return windows_; }

 protected:
  void eval_impl(double x, int m_max, cplx* out) const override;

 private:
  SingularSplit split_;
  double eps_minus_, eps_plus_, eps_zero_;
  std::vector<ResolutionWindow> windows_;
};

std::shared_ptr<const MollifiedPotential> mollified_potential(const SingularSplit& split, double lambda,
                                                              const MollifySpec& spec);

}  // namespace pm
