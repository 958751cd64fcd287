#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pseudomode/oracle.hpp"
#include "pseudomode/residual.hpp"

using namespace pm;

namespace {

PotentialPtr constant_potential(double re, double im) {
  Params p;
  p.scalars["re"] = re;
  p.scalars["im"] = im;
  return make_builtin("constant", p);
}

std::vector<cplx> sampled(const DiscreteOperator& a, const std::function<cplx(double)>& fn) {
  std::vector<cplx> out;
  for (double x : a.nodes()) out.push_back(fn(x));
  return out;
}

}  // namespace

TEST(Oracle, StepIsAdjustedToDivideTheInterval) {
  auto zero = constant_potential(0.0, 0.0);
  const DiscreteOperator a = discretize(*zero, 0.0, 1.0, 0.3);
  EXPECT_NEAR(a.h, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(a.size, 2u);
  EXPECT_NEAR(a.node(1), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(discretize(*zero, 0.0, 1.0, 0.8), Error);
  EXPECT_THROW(discretize(*zero, 1.0, 0.0, 0.1), Error);
}

TEST(Oracle, ResolutionRule) {
  auto zero = constant_potential(0.0, 0.0);
  try {
    discretize(*zero, 0.0, 1.0, 0.05, 1e4);
    ADD_FAILURE() << "coarse step accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::resolution_insufficient);
  }
  EXPECT_NO_THROW(discretize(*zero, 0.0, 1.0, 0.003, 1e4));
}

TEST(Oracle, DirichletGroundState) {
  // Smallest eigenvalue of the three-point Laplacian on (0, pi): (4 / h^2) sin^2(h / 2).
  auto zero = constant_potential(0.0, 0.0);
  const DiscreteOperator a = discretize(*zero, 0.0, std::numbers::pi, std::numbers::pi / 400.0);
  const double ground = 4.0 / (a.h * a.h) * std::pow(std::sin(a.h / 2.0), 2);
  const SigmaMinResult probe = sigma_min_probe(a, 0.0, 1e-12, 2000);
  EXPECT_NEAR(probe.sigma_min, ground, 1e-9);
  EXPECT_NEAR(probe.sigma_min, 1.0, 1e-5);
}

TEST(Oracle, DiscreteEigenpairHasNoResidual) {
  const cplx c(2.0, -1.0);
  auto v = constant_potential(c.real(), c.imag());
  const DiscreteOperator a = discretize(*v, 0.0, 2.0, 0.01);
  const int mode = 3;
  const double k = mode * std::numbers::pi / 2.0;
  const cplx eig = c + 4.0 / (a.h * a.h) * std::pow(std::sin(k * a.h / 2.0), 2);
  const auto f = sampled(a, [&](double x) { return cplx(std::sin(k * x)); });
  EXPECT_LT(disc_residual(a, f, eig), 1e-9);
  const auto r = disc_residual_vector(a, f, eig);
  ASSERT_EQ(r.size(), a.size);
  // sigma_min is a lower bound for any residual ratio.
  EXPECT_LE(sigma_min_probe(a, eig + 0.3).sigma_min, disc_residual(a, f, eig + 0.3) * (1.0 + 1e-9));
}

TEST(Oracle, SineResidualIsSecondOrder) {
  // sin is an exact eigenfunction of -d^2/dx^2, so the discrete residual is the truncation error.
  auto zero = constant_potential(0.0, 0.0);
  double previous = 0.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const DiscreteOperator a = discretize(*zero, 0.0, std::numbers::pi, std::numbers::pi * h);
    const double res = disc_residual(a, sampled(a, [](double x) { return cplx(std::sin(x)); }), 1.0);
    EXPECT_NEAR(res, a.h * a.h / 12.0, 0.01 * a.h * a.h);
    if (previous > 0.0) {
      const double order = std::log2(previous / res);
      EXPECT_GE(order, 1.7);
      EXPECT_LE(order, 2.3);
    }
    previous = res;
  }
}

TEST(Oracle, StepRule) {
  const double lambda = 1e3, target = 0.1;
  const double h = oracle_step(lambda, target);
  EXPECT_NEAR(std::pow(lambda, 3) * std::pow(h, 4) / 1440.0, target / 50.0, 1e-12 * target);
  const double capped = oracle_step(1e2, 1e6);
  EXPECT_NEAR(capped, 2.0 * std::numbers::pi / 10.0 / 20.0, 1e-15);
}

TEST(Oracle, CrossCheckAgreesForLinearPotential) {
  Params p;
  p.scalars["gamma"] = 1.0;
  auto v = make_builtin("monomial_imag", p);
  const double lambda = 100.0;
  const CutoffSpec spec = widths_real_axis(*v, lambda);
  ExpansionConfig cfg;
  cfg.n = 2;
  const double analytic = report(assemble(*v, lambda, cfg, spec)).ratio;
  const OracleCheck check = oracle_cross_check(*v, lambda, cfg, spec, oracle_step(lambda, analytic), analytic);
  EXPECT_FALSE(check.floor_limited);
  EXPECT_LT(check.relative_gap, 0.1);
  EXPECT_LE(check.sigma_min, check.disc_ratio_richardson * (1.0 + 1e-9));
  EXPECT_GT(check.size, 0u);
}
