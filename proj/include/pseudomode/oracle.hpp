#pragma once

#include <vector>

#include "pseudomode/expansion.hpp"
#include "pseudomode/potentials.hpp"

namespace pm {

// Three-point Dirichlet discretization of -d^2/dx^2 + V on [x_lo, x_hi] with interior nodes
// x_i = x_lo + i h, i = 1..size.
struct DiscreteOperator {
  double x_lo = 0.0, x_hi = 0.0, h = 0.0;
  std::vector<cplx> diag;  // V(x_i) + 2 / h^2
  double offdiag = 0.0;    // -1 / h^2
  std::size_t size = 0;

  double node(std::size_t i) const { return x_lo + static_cast<double>(i + 1) * h; }
  std::vector<double> nodes() const;
  std::vector<cplx> apply(const std::vector<cplx>& v) const;
};

// h is adjusted to divide the interval exactly. When lambda is supplied the step must resolve the
// oscillation scale: h <= (2 pi / sqrt|lambda|) / 20.
DiscreteOperator discretize(const Potential& p, double x_lo, double x_hi, double h, double lambda_abs = 0.0);

// A f - lambda f on the interior nodes.
std::vector<cplx> disc_residual_vector(const DiscreteOperator& a, const std::vector<cplx>& f, cplx lambda);

// ||A f - lambda f|| / ||f|| with h-weighted discrete norms.
double disc_residual(const DiscreteOperator& a, const std::vector<cplx>& f, cplx lambda);

struct SigmaMinResult {
  double sigma_min = 0.0;
  int iterations = 0;
  double last_change = 0.0;
};

// Smallest singular value of A - lambda by inverse iteration on the normal equations.
SigmaMinResult sigma_min_probe(const DiscreteOperator& a, cplx lambda, double rel_tol = 1e-6, int max_iter = 500);

struct OracleCheck {
  double analytic_ratio = 0.0;
  double disc_ratio_h = 0.0;         // residual at step h
  double disc_ratio_half = 0.0;      // residual at step h/2
  double disc_ratio_richardson = 0.0;
  double floor_estimate = 0.0;       // O(h^4) truncation plus sample rounding amplified by 1/h^2
  bool floor_limited = false;
  double sigma_min = 0.0;
  double relative_gap = 0.0;         // |richardson - analytic| / analytic
  std::size_t size = 0;
};

// Assembles the pseudomode on the FD nodes at steps h and h/2, extrapolates the residual vector
// (4 R_{h/2} - R_h) / 3 at the coarse nodes and compares with the analytic ratio.
OracleCheck oracle_cross_check(const Potential& p, cplx lambda, const ExpansionConfig& cfg, const CutoffSpec& spec,
                               double h, double analytic_ratio, bool with_sigma_min = true);

// Step for which |lambda|^3 h^4 / 1440 is 1/50 of the target ratio, capped by the resolution rule.
double oracle_step(double lambda_abs, double target_ratio);

}  // namespace pm
