#include <gtest/gtest.h>

#include <cmath>

#include "pseudomode/curves.hpp"

using namespace pm;

namespace {

PotentialPtr monomial(double gamma) {
  Params p;
  p.scalars["gamma"] = gamma;
  return make_builtin("monomial_imag", p);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::config_invalid;
}

}  // namespace

TEST(Curves, SingularWindowExponents) {
  const double b = 1e4;
  const auto [lo, hi] = admissible_a_range_singular(3.0, b, 0.1);
  EXPECT_NEAR(std::log10(lo), 4.0 * (8.0 / 9.0 + 0.1), 1e-12);
  EXPECT_NEAR(std::log10(hi), 4.0 * (4.0 / 3.0 - 0.1), 1e-12);
  EXPECT_EQ(code_of([] { admissible_a_range_singular(2.5, 1e4, 0.5); }), ErrorCode::empty_window);
}

TEST(Curves, DecayingWidthWindow) {
  const auto [lo, hi] = decaying_width_window(0.5, 1.0);
  EXPECT_DOUBLE_EQ(lo, 1.0);
  EXPECT_DOUBLE_EQ(hi, 2.0);
  EXPECT_EQ(code_of([] { decaying_width_window(0.5, 0.4); }), ErrorCode::invalid_regime_params);
  EXPECT_EQ(code_of([] { decaying_width_window(1.0, 1.0); }), ErrorCode::invalid_regime_params);
}

TEST(Curves, Abscissae) {
  const auto grid = log_spaced(1e2, 1e5, 4);
  ASSERT_EQ(grid.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::log10(grid[i]), 2.0 + i, 1e-14);
  PathParams params;
  params.values = {300.0, 100.0, 200.0};
  EXPECT_EQ(path_abscissae(params), (std::vector<double>{100.0, 200.0, 300.0}));
  params.values = {100.0, 0.0};
  EXPECT_THROW(path_abscissae(params), Error);
  EXPECT_THROW(log_spaced(0.0, 1.0, 3), Error);
}

TEST(Curves, CurvePathTurningPoints) {
  auto v = monomial(2.0);
  PathParams params;
  params.lo = 1e2;
  params.hi = 1e4;
  params.count = 3;
  const LambdaPath path = make_path(Regime::curve, *v, params);
  ASSERT_EQ(path.points.size(), 3u);
  for (const PathPoint& pt : path.points) {
    EXPECT_EQ(pt.lambda, cplx(pt.b, pt.b));
    ASSERT_TRUE(pt.x_b.has_value());
    EXPECT_NEAR(*pt.x_b / std::sqrt(pt.b), 1.0, 1e-12);
    EXPECT_EQ(pt.cutoff.center, *pt.x_b);
  }
  params.exponent = 3.0;
  EXPECT_EQ(code_of([&] { make_path(Regime::curve, *v, params); }), ErrorCode::exponent_outside_window);
}

TEST(Curves, DecayingPathNeedsDecayingPotential) {
  PathParams params;
  EXPECT_EQ(code_of([&] { make_path(Regime::decaying, *monomial(1.0), params); }), ErrorCode::invalid_regime_params);
}

TEST(Curves, SemiclassicalPath) {
  auto u = monomial(1.0);
  PathParams params;
  params.h_values = {0.125, 0.5, 0.25};
  params.z = cplx(1.0, 0.5);
  params.x0 = 0.3;
  const LambdaPath path = make_path(Regime::semiclassical, *u, params);
  ASSERT_EQ(path.points.size(), 3u);
  EXPECT_EQ(*path.points[0].h, 0.5);
  EXPECT_EQ(*path.points[2].h, 0.125);
  for (const PathPoint& pt : path.points) {
    const double h = *pt.h;
    EXPECT_LT(std::abs(pt.lambda - params.z / (h * h)), 1e-12 * std::abs(pt.lambda));
    EXPECT_EQ(pt.cutoff.center, 0.3);
    EXPECT_NEAR(pt.cutoff.delta_plus, std::pow(h, 0.25), 1e-15);
  }
  params.h_values.clear();
  EXPECT_THROW(make_path(Regime::semiclassical, *u, params), Error);
}

TEST(Curves, SemiclassicalResidualIsHSquaredTimesScaled) {
  auto u = monomial(1.0);
  PathParams params;
  params.h_values = {0.25, 1.0 / 16.0, 1.0 / 64.0};
  const LambdaPath path = make_path(Regime::semiclassical, *u, params);
  SweepSetup setup;
  setup.potential = u;
  setup.cfg.n = 2;
  const auto grids = assemble_on_path(path, setup);
  const auto reports = report_path(path, grids);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const double h = *reports[i].h;
    const double log_h_route = semiclassical_log_ratio(grids[i], *u, params.z, h);
    EXPECT_NEAR(log_h_route - reports[i].log_ratio, 2.0 * std::log(h), 1e-11) << "h=" << h;
  }
}

TEST(Curves, ModeRequirements) {
  PathParams params;
  params.lo = 1e2;
  params.hi = 1e3;
  params.count = 2;
  Params p;
  p.scalars["gamma"] = 2.0;
  auto v = make_builtin("poly_like", p);
  const LambdaPath path = make_path(Regime::real_axis, *v, params);
  SweepSetup setup;
  setup.potential = v;
  setup.mode = ResidualMode::ignore_w;
  EXPECT_EQ(code_of([&] { assemble_on_path(path, setup); }), ErrorCode::invalid_regime_params);
  setup.split = split_singular("sgn_imag_split", {});
  setup.mode = ResidualMode::mollified;
  setup.cfg.n = 2;
  EXPECT_EQ(code_of([&] { assemble_on_path(path, setup); }), ErrorCode::unsupported_order);
}
