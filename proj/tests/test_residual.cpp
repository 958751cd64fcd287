#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pseudomode/residual.hpp"

using namespace pm;

namespace {

std::vector<double> jittered(double lo, double hi, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::vector<double> x(count);
  const double h = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) x[i] = lo + h * (i + ((i == 0 || i == count - 1) ? 0.0 : jitter(rng)));
  return x;
}

double weighted_sum(const std::vector<double>& nodes, const std::function<double(double)>& fn) {
  const auto w = simpson_weights(nodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += w[i] * fn(nodes[i]);
  return acc;
}

ResidualReport synthetic(double lambda, double log_sigma) {
  ResidualReport r;
  r.lambda = lambda;
  r.log_sigma = log_sigma;
  return r;
}

}  // namespace

TEST(Residual, SimpsonWeightsAreExactForQuadratics) {
  auto quad = [](double x) { return 3.0 * x * x - x + 2.0; };
  const double exact = 8.0 - 2.0 + 4.0;  // over [0, 2]
  for (int count : {3, 4, 11, 50}) {
    const auto nodes = jittered(0.0, 2.0, count, 7u + count);
    EXPECT_NEAR(weighted_sum(nodes, quad), exact, 1e-12) << count;
  }
  EXPECT_THROW(simpson_weights({1.0}), Error);
  EXPECT_EQ(simpson_weights({0.0, 1.0}), (std::vector<double>{0.5, 0.5}));
}

TEST(Residual, GaussianL2Norm) {
  std::vector<double> nodes;
  std::vector<cplx> values;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -8.0 + 16.0 * i / 4000.0;
    nodes.push_back(x);
    values.push_back(std::exp(cplx(-x * x, 3.0 * x)));
  }
  const double want = std::pow(M_PI / 2.0, 0.25);
  EXPECT_NEAR(l2_norm(nodes, values, ExecPolicy::serial), want, 1e-12);
  EXPECT_NEAR(l2_norm(nodes, values, ExecPolicy::parallel), want, 1e-12);
}

TEST(Residual, LogNormSurvivesHugeExponents) {
  std::vector<double> nodes, mag, log_scale;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -6.0 + 12.0 * i / 2000.0;
    nodes.push_back(x);
    mag.push_back(1.0);
    log_scale.push_back(-5000.0 - x * x);
  }
  const auto w = simpson_weights(nodes);
  EXPECT_NEAR(log_l2_norm(nodes, w, mag, log_scale), -5000.0 + 0.25 * std::log(M_PI / 2.0), 1e-10);
  std::fill(mag.begin(), mag.end(), 0.0);
  EXPECT_EQ(log_l2_norm(nodes, w, mag, log_scale), -std::numeric_limits<double>::infinity());
}

TEST(Residual, ReportComponentsMatchDirectNorms) {
  Params p;
  p.scalars["gamma"] = 1.0;
  auto v = make_builtin("monomial_imag", p);
  const double lambda = 40.0;
  const CutoffSpec spec = symmetric_cutoff(Regime::real_axis, 0.0, 3.0);
  const PseudomodeGrid grid = assemble(*v, lambda, ExpansionConfig{}, spec);
  const ResidualReport r = report(grid);
  std::vector<cplx> f, res, pp, p1, rem;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx g = grid.g(i);
    f.push_back(grid.xi[i] * g);
    res.push_back(grid.residual_factor(i) * g);
    pp.push_back(grid.xi_pp[i] * g);
    p1.push_back(grid.xi_p[i] * grid.g_prime(i));
    rem.push_back(grid.xi[i] * grid.remainder[i] * g);
  }
  const double fn = l2_norm(grid.nodes, f);
  EXPECT_NEAR(r.f_norm / fn, 1.0, 1e-12);
  EXPECT_NEAR(r.ratio / (l2_norm(grid.nodes, res) / fn), 1.0, 1e-12);
  EXPECT_NEAR(r.kappa / ((l2_norm(grid.nodes, pp) + 2.0 * l2_norm(grid.nodes, p1)) / fn), 1.0, 1e-12);
  EXPECT_NEAR(r.sigma / (l2_norm(grid.nodes, rem) / fn), 1.0, 1e-12);
  EXPECT_EQ(r.extra, 0.0);
  EXPECT_LE(r.ratio, r.kappa + r.sigma * (1.0 + 1e-12));
}

TEST(Residual, RateFitRecoversSyntheticSlope) {
  std::vector<double> lx, ly;
  for (int i = 0; i < 8; ++i) {
    lx.push_back(std::log(100.0) + i * std::log(10.0) * 3.0 / 7.0);
    ly.push_back(-1.5 * lx.back() + 2.0);
  }
  RateFit fit = rate_fit(lx, ly);
  EXPECT_NEAR(fit.slope, -1.5, 1e-12);
  EXPECT_NEAR(fit.intercept, 2.0, 1e-10);
  EXPECT_FALSE(fit.transient_dropped);
  EXPECT_EQ(fit.points_used, 8);
  // A pre-asymptotic bump on the leading half is dropped.
  for (int i = 0; i < 4; ++i) ly[i] += 0.5 * (4 - i);
  fit = rate_fit(lx, ly);
  EXPECT_TRUE(fit.transient_dropped);
  EXPECT_NEAR(fit.slope, -1.5, 1e-12);
  EXPECT_EQ(fit.points_used, 4);
}

TEST(Residual, RateFitPreconditions) {
  EXPECT_THROW(rate_fit({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), Error);
  EXPECT_THROW(rate_fit({1.0, 2.0, 3.0, 4.0}, {1.0, 2.0, 3.0}), Error);
  std::vector<ResidualReport> narrow;
  for (double lam : {100.0, 200.0, 500.0, 900.0}) narrow.push_back(synthetic(lam, -std::log(lam)));
  EXPECT_THROW(rate_fit(narrow, ReportField::sigma), Error);
  std::vector<ResidualReport> wide;
  for (double lam : {1e2, 1e3, 1e4, 1e5}) wide.push_back(synthetic(lam, -0.75 * std::log(lam)));
  EXPECT_NEAR(rate_fit(wide, ReportField::sigma).slope, -0.75, 1e-12);
  EXPECT_STREQ(field_name(ReportField::f_norm), "f_norm");
}
