#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pseudomode/cutoff.hpp"
#include "pseudomode/expansion.hpp"
#include "pseudomode/mollify.hpp"
#include "pseudomode/residual.hpp"

namespace pm {

struct PathPoint {
  cplx lambda;
  double a = 0.0, b = 0.0;
  std::optional<double> x_b;
  std::optional<double> h;
  CutoffSpec cutoff;
};

struct PathParams {
  double lo = 1e2, hi = 1e5;  // lambda (real axis), b (curve, singular), a (decaying)
  int count = 8;
  std::vector<double> values;   // explicit abscissae; overrides lo, hi, count when nonempty
  double exponent = 1.0;        // a = b^exponent (curve, singular) or b = a^{-exponent} (decaying)
  std::vector<double> h_values;  // semiclassical
  cplx z = 1.0;                  // semiclassical spectral parameter
  double x0 = 0.0;               // semiclassical localization point
  double sc_eps = 0.5;           // semiclassical width exponent: delta = h^{(1 - sc_eps)/2}
  double sing_eps = 0.1;         // margin in the singular a-window
  WidthOptions widths;
};

struct LambdaPath {
  Regime regime = Regime::real_axis;
  std::vector<PathPoint> points;
  PathParams params;
  double decay_width_exponent = 0.0;  // q in delta = a^q (decaying regime)
};

// Window for a in lambda = a + i b with unit implicit constants; a_lo includes max Re V on J_b.
std::pair<double, double> admissible_a_range(const Potential& p, double b, double x_b, double delta);
// Strong-singularity window b^{(2/3)(1 + 1/alpha) + eps} .. b^{2(1 - 1/alpha) - eps}.
std::pair<double, double> admissible_a_range_singular(double alpha, double b, double eps = 0.1);

// Open interval (1/(2(1 - gamma)), p / gamma) for the decaying-regime width exponent; throws if empty.
std::pair<double, double> decaying_width_window(double gamma, double p);

std::vector<double> log_spaced(double lo, double hi, int count);

// Explicit values sorted ascending, otherwise the log-spaced range.
std::vector<double> path_abscissae(const PathParams& params);

// For the singular regime pass the full potential; alpha is read from params "alpha" through the
// potential name (inv_singularity) and defaults to 3.
LambdaPath make_path(Regime regime, const Potential& p, const PathParams& params, double alpha = 3.0);

struct SweepSetup {
  PotentialPtr potential;               // ansatz potential (regular part for splits)
  std::optional<SingularSplit> split;  // ignore-W and mollified modes
  ResidualMode mode = ResidualMode::plain;
  ExpansionConfig cfg;
  MollifySpec mollify;
};

// One pseudomode per path point. Points run in parallel under the parallel policy.
std::vector<PseudomodeGrid> assemble_on_path(const LambdaPath& path, const SweepSetup& setup,
                                             ExecPolicy policy = ExecPolicy::parallel);

// Reports for each grid, with h filled in for semiclassical paths.
std::vector<ResidualReport> report_path(const LambdaPath& path, const std::vector<PseudomodeGrid>& grids,
                                        ExecPolicy policy = ExecPolicy::parallel);

// Residual of -h^2 f'' + (U - z) f evaluated term by term in the unscaled variables, divided by ||f||.
// Returns the log of the ratio.
double semiclassical_log_ratio(const PseudomodeGrid& grid, const Potential& u, cplx z, double h);

}  // namespace pm
