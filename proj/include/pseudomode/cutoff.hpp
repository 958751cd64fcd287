#pragma once

#include <optional>
#include <string>

#include "pseudomode/potentials.hpp"

namespace pm {

enum class Regime { real_axis, curve, decaying, singular, semiclassical };

const char* regime_name(Regime r);
Regime parse_regime(const std::string& s);  // throws config_invalid

// Frozen sup-norm constants of the bump: |xi'| Delta <= kBumpD1, |xi''| Delta^2 <= kBumpD2.
inline constexpr double kBumpD1 = 2.5;
inline constexpr double kBumpD2 = 12.0;

struct CutoffSpec {
  Regime regime = Regime::real_axis;
  double delta_minus = 1.0, delta_plus = 1.0;
  double Delta_minus = 0.25, Delta_plus = 0.25;
  double center = 0.0;
  double bump_d1 = kBumpD1, bump_d2 = kBumpD2;
  std::optional<double> x_b;
  // How each width was obtained: "first-crossing", "bounded-side", "turning-point", "prescribed".
  std::string rule_minus = "prescribed", rule_plus = "prescribed";

  double j_lo() const { return center - delta_minus; }
  double j_hi() const { return center + delta_plus; }
  double jp_lo() const { return center - delta_minus + Delta_minus; }
  double jp_hi() const { return center + delta_plus - Delta_plus; }
};

struct WidthOptions {
  std::optional<double> eps1;
  std::optional<double> eps2;
};

// Real-axis widths: smallest crossing of |Im V(+-d)|^2 / <d>^{4 nu + 2 eps1 + 2} = lambda on
// unbounded sides, d = lambda^{(1 + eps2)/2} on bounded sides.
CutoffSpec widths_real_axis(const Potential& p, double lambda, const WidthOptions& opt = {});

// Turning-point widths for Im lambda = b. The singular regime uses delta = |x_b| / 2.
CutoffSpec widths_curve(const Potential& p, double b, Regime regime = Regime::curve);

// Solves Im V(x) = b on the monotone tail (rightmost crossing; the approach to 0 on the negative
// half-line).
double turning_point(const Potential& p, double b);

CutoffSpec symmetric_cutoff(Regime regime, double center, double delta);

// xi^(order)(x) for order 0, 1, 2.
double bump_eval(const CutoffSpec& spec, double x, int order);
void bump_eval_all(const CutoffSpec& spec, double x, double out[3]);

}  // namespace pm
