#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pseudomode/cutoff.hpp"
#include "pseudomode/potentials.hpp"
#include "pseudomode/symbolic_wkb.hpp"

namespace pm {

// Serial reference loops or OpenMP-parallel kernels; both produce bit-identical results
// for the assembly loops and agree to rounding for reductions.
enum class ExecPolicy { serial, parallel };

struct ExpansionConfig {
  int n = 2;
  std::optional<double> base_point;  // defaults to the cutoff center
  double quad_tol = 1e-10;
  int min_nodes = 2000;
  double grid_refine = 1.0;  // multiplies every segment's node count
  ExecPolicy policy = ExecPolicy::parallel;
};

// Numeric plan for a TermSum with coefficients converted once.
class TermEvaluator {
 public:
  TermEvaluator() = default;
  explicit TermEvaluator(const TermSum& s);

  int max_order() const { return max_order_; }
  bool empty() const { return items_.empty(); }

  // derivs[0..max_order()], lambda_sqrt = lambda^{1/2}, res_sqrt = (lambda - V)^{1/2}.
  cplx operator()(const cplx* derivs, cplx lambda_sqrt, cplx res_sqrt) const;

  // Same sum with each V^(i) replaced by derivs[i] * scale^{-2} and lambda, lambda - V replaced
  // by the unscaled z and z - U, times scale^{extra}: used for the semiclassical h-route.
  cplx eval_rescaled(const cplx* u_derivs, cplx z_sqrt, cplx zu_sqrt, double h, int extra_h_power) const;

 private:
  struct Item {
    cplx coeff;
    std::vector<std::pair<int, int>> factors;
    int lam = 0, res = 0, count = 0;
  };
  std::vector<Item> items_;
  int max_order_ = 0;
  int min_res_ = 0, max_res_ = 0, min_lam_ = 0, max_lam_ = 0;
};

// Principal (lambda - v)^{1/2}; rejects points on the negative real axis within 1e-12.
cplx principal_res_sqrt(cplx lambda, cplx v, double x);

cplx eval_termsum(const TermSum& s, const Potential& p, double x, cplx lambda);

// Phi' = sum_{k=-1}^{n-1} lambda^{-k/2} psi_k', optionally without the k = 0 term.
TermSum scaled_exponent_derivative(int n, bool include_zero = true);

// psi_k(node) = integral of psi_k' from the base point, k in [-1, n-1].
std::vector<cplx> cumulative_psi(const Potential& p, cplx lambda, const ExpansionConfig& cfg, int k,
                                 const std::vector<double>& nodes);

enum class ResidualMode { plain, ignore_w, extra_term, mollified };

const char* mode_name(ResidualMode m);
ResidualMode parse_mode(const std::string& s);

struct AssembleOptions {
  ResidualMode mode = ResidualMode::plain;
  // Added to the operator but not to the ansatz: W for ignore-W, W - W~ for mollified.
  std::function<cplx(double)> extra_potential;
  std::vector<ResolutionWindow> extra_windows;
  std::vector<double> explicit_nodes;  // bypasses the graded grid
  bool keep_psi = false;               // fill psi_cumulative per k
};

// Pseudomode samples. The Gaussian factor is kept as log g = -Phi split in a high and low part
// so that magnitudes never underflow and phases stay accurate at large |Phi|.
struct PseudomodeGrid {
  cplx lambda;
  int n = 0;
  ResidualMode mode = ResidualMode::plain;
  CutoffSpec cutoff;
  double base_point = 0.0;
  std::vector<double> nodes;
  std::vector<std::vector<cplx>> psi_cumulative;  // index k + 1, only with keep_psi
  std::vector<cplx> log_g_hi, log_g_lo;
  std::vector<cplx> phi_prime;  // Phi' = sum_k lambda^{-k/2} psi_k'
  std::vector<double> xi, xi_p, xi_pp;
  std::vector<cplx> remainder;  // r_n
  std::vector<cplx> head;       // V^(n+1) part of r_n
  std::vector<cplx> extra_potential;

  std::size_t size() const { return nodes.size(); }
  double log_abs_g(std::size_t i) const { return log_g_hi[i].real() + log_g_lo[i].real(); }
  cplx g(std::size_t i) const;
  cplx g_prime(std::size_t i) const { return -phi_prime[i] * g(i); }
  cplx f(std::size_t i) const { return xi[i] * g(i); }
  // (H - lambda) f / g = xi r_n - xi'' + 2 xi' Phi' + xi E.
  cplx residual_factor(std::size_t i) const;
  cplx residual_integrand(std::size_t i) const { return residual_factor(i) * g(i); }
  std::vector<cplx> g_vals() const;
  std::vector<cplx> f_vals() const;
};

std::vector<double> graded_grid(const Potential& p, cplx lambda, const CutoffSpec& spec, const ExpansionConfig& cfg,
                                const std::vector<ResolutionWindow>& extra_windows = {});

PseudomodeGrid assemble(const Potential& p, cplx lambda, const ExpansionConfig& cfg, const CutoffSpec& spec,
                        const AssembleOptions& opt = {});

}  // namespace pm
