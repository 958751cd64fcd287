#include <gtest/gtest.h>

#include <cmath>

#include "pseudomode/cutoff.hpp"

using namespace pm;

namespace {

PotentialPtr potential(const char* name, std::initializer_list<std::pair<const std::string, double>> kv = {}) {
  Params p;
  p.scalars = kv;
  return make_builtin(name, p);
}

}  // namespace

TEST(Cutoff, LinearWidthHasClosedForm) {
  // For V = ix with nu = -1 and eps1 = 1 the crossing condition reads d^2 = lambda.
  auto v = potential("monomial_imag", {{"gamma", 1.0}});
  WidthOptions wo;
  wo.eps1 = 1.0;
  for (double lambda : {1e2, 1e4, 1e6}) {
    const CutoffSpec s = widths_real_axis(*v, lambda, wo);
    EXPECT_NEAR(s.delta_plus, std::sqrt(lambda), 1e-9 * std::sqrt(lambda));
    EXPECT_NEAR(s.delta_minus, s.delta_plus, 1e-9 * s.delta_plus);
    EXPECT_NEAR(s.Delta_plus, s.delta_plus / 4.0, 1e-9 * s.delta_plus);
    EXPECT_EQ(s.rule_plus, "first-crossing");
  }
}

TEST(Cutoff, BoundedSideUsesPowerOfLambda) {
  auto v = potential("arctan_imag");
  ASSERT_TRUE(v->meta().bounded_plus);
  WidthOptions wo;
  wo.eps2 = 0.5;
  const CutoffSpec s = widths_real_axis(*v, 100.0, wo);
  EXPECT_NEAR(s.delta_plus, std::pow(100.0, 0.75), 1e-12);
  EXPECT_EQ(s.rule_plus, "bounded-side");
}

TEST(Cutoff, RealAxisRejectsHalfLine) {
  auto v = potential("inv_singularity", {{"alpha", 3.0}});
  EXPECT_THROW(widths_real_axis(*v, 100.0), Error);
}

TEST(Cutoff, TurningPoints) {
  auto square = potential("monomial_imag", {{"gamma", 2.0}});
  for (double b : {1e2, 3.7e3, 1e5}) EXPECT_NEAR(turning_point(*square, b), std::sqrt(b), 1e-12 * std::sqrt(b));
  auto singular = potential("inv_singularity", {{"alpha", 3.0}});
  for (double b : {1e3, 1e6}) EXPECT_NEAR(turning_point(*singular, b), -std::cbrt(1.0 / b), 1e-13);
  const CutoffSpec s = widths_curve(*singular, 1e3, Regime::singular);
  EXPECT_NEAR(s.delta_plus, 0.05, 1e-13);
  EXPECT_EQ(s.rule_plus, "turning-point");
}

TEST(Cutoff, BumpPlateauAndSupport) {
  const CutoffSpec s = symmetric_cutoff(Regime::real_axis, 1.0, 2.0);
  EXPECT_EQ(bump_eval(s, 1.0, 0), 1.0);
  EXPECT_EQ(bump_eval(s, s.jp_lo(), 0), 1.0);
  EXPECT_EQ(bump_eval(s, s.jp_hi() - 1e-9, 1), 0.0);
  EXPECT_EQ(bump_eval(s, s.j_lo() - 1e-9, 0), 0.0);
  EXPECT_EQ(bump_eval(s, s.j_hi() + 0.1, 0), 0.0);
  const double mid = s.j_lo() + s.Delta_minus / 2.0;
  EXPECT_NEAR(bump_eval(s, mid, 0), 0.5, 1e-15);
  EXPECT_THROW(bump_eval(s, 0.0, 3), Error);
}

TEST(Cutoff, BumpDerivativesMatchFiniteDifferences) {
  const CutoffSpec s = symmetric_cutoff(Regime::real_axis, 0.0, 4.0);
  const double h = 1e-4;
  for (double x : {-3.8, -3.3, 3.05, 3.5}) {
    const double d1 = (bump_eval(s, x + h, 0) - bump_eval(s, x - h, 0)) / (2 * h);
    const double d2 = (bump_eval(s, x + h, 0) - 2 * bump_eval(s, x, 0) + bump_eval(s, x - h, 0)) / (h * h);
    EXPECT_NEAR(bump_eval(s, x, 1), d1, 1e-6);
    EXPECT_NEAR(bump_eval(s, x, 2), d2, 1e-4);
  }
}

TEST(Cutoff, BumpConstantsBoundScaledDerivatives) {
  const CutoffSpec s = symmetric_cutoff(Regime::real_axis, 0.0, 1.0);
  double d1 = 0.0, d2 = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double x = s.j_lo() + s.Delta_minus * i / 20000.0;
    d1 = std::max(d1, std::abs(bump_eval(s, x, 1)) * s.Delta_minus);
    d2 = std::max(d2, std::abs(bump_eval(s, x, 2)) * s.Delta_minus * s.Delta_minus);
  }
  EXPECT_LE(d1, kBumpD1);
  EXPECT_LE(d2, kBumpD2);
  EXPECT_GT(d1, 1.0);
}

TEST(Cutoff, RegimeNamesRoundTrip) {
  for (Regime r : {Regime::real_axis, Regime::curve, Regime::decaying, Regime::singular, Regime::semiclassical})
    EXPECT_EQ(parse_regime(regime_name(r)), r);
  EXPECT_THROW(parse_regime("imaginary_axis"), Error);
}
