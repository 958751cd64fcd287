#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pseudomode/expansion.hpp"

namespace pm {

// Composite Simpson weights on arbitrary sorted nodes (pairs of intervals, last odd interval
// closed with a three-point rule).
std::vector<double> simpson_weights(const std::vector<double>& nodes);

// L2 norm of sampled values on the nodes.
double l2_norm(const std::vector<double>& nodes, const std::vector<cplx>& values,
               ExecPolicy policy = ExecPolicy::parallel);

// log ||u e^{l}|| for magnitudes u >= 0 and log weights l, shifted by the maximum to avoid
// under/overflow. Returns -inf for an identically zero integrand.
double log_l2_norm(const std::vector<double>& nodes, const std::vector<double>& weights,
                   const std::vector<double>& magnitudes, const std::vector<double>& log_scale,
                   ExecPolicy policy = ExecPolicy::parallel);

struct ResidualReport {
  cplx lambda;
  double log_f_norm = 0.0;
  double log_residual_norm = 0.0;
  double log_ratio = 0.0;
  double log_kappa = 0.0;
  double log_sigma = 0.0;
  double log_extra = -std::numeric_limits<double>::infinity();
  double f_norm = 0.0, residual_norm = 0.0;
  double ratio = 0.0, kappa = 0.0, sigma = 0.0, extra = 0.0;
  double delta_minus = 0.0, delta_plus = 0.0, Delta_minus = 0.0, Delta_plus = 0.0;
  std::optional<double> x_b;
  std::optional<double> h;  // semiclassical parameter
  std::size_t nodes = 0;
};

// kappa = (||xi'' g|| + 2 ||xi' g'||) / ||f||, sigma = ||xi r_n g|| / ||f|| (head term moved to
// extra in extra-term mode), extra = ||xi E g|| / ||f|| in ignore-W and mollified modes.
ResidualReport report(const PseudomodeGrid& grid, ExecPolicy policy = ExecPolicy::parallel);

enum class ReportField { ratio, kappa, sigma, extra, f_norm };

const char* field_name(ReportField f);
double log_field(const ResidualReport& r, ReportField f);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_of_fit = 0.0;  // RMS of log residuals
  int points_used = 0;
  bool transient_dropped = false;
};

// Least squares of log_y on log_x. The leading half may be dropped when that at least halves the
// fit residual and leaves at least four points.
RateFit rate_fit(const std::vector<double>& log_x, const std::vector<double>& log_y);

// Fit of log(field) against log|lambda|; needs at least 4 points over at least two decades.
RateFit rate_fit(const std::vector<ResidualReport>& reports, ReportField field);

}  // namespace pm
