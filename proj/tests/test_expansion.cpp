#include <gtest/gtest.h>

#include <cmath>

#include "pseudomode/expansion.hpp"

using namespace pm;

namespace {

PotentialPtr potential(const char* name, double gamma) {
  Params p;
  p.scalars["gamma"] = gamma;
  return make_builtin(name, p);
}

std::vector<double> uniform(double lo, double hi, int count) {
  std::vector<double> x(count);
  for (int i = 0; i < count; ++i) x[i] = lo + (hi - lo) * i / (count - 1);
  return x;
}

// Fourth-order central difference of sampled values on a uniform grid.
cplx diff4(const std::vector<cplx>& v, std::size_t i, double h) {
  return (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
}

PseudomodeGrid uniform_grid(const Potential& p, double lambda, int n, double lo, double hi, double step) {
  ExpansionConfig cfg;
  cfg.n = n;
  AssembleOptions opt;
  opt.explicit_nodes = uniform(lo, hi, static_cast<int>(std::lround((hi - lo) / step)) + 1);
  return assemble(p, lambda, cfg, symmetric_cutoff(Regime::real_axis, 0.0, 5.0), opt);
}

}  // namespace

TEST(Expansion, PsiZeroIsQuarterLog) {
  auto v = potential("monomial_imag", 1.0);
  const cplx lambda = 50.0;
  ExpansionConfig cfg;
  cfg.base_point = 0.0;
  const std::vector<double> nodes = {-3.0, -1.0, 0.0, 0.5, 2.0, 4.0};
  const auto psi0 = cumulative_psi(*v, lambda, cfg, 0, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cplx want = 0.25 * (std::log(lambda - v->eval(0, nodes[i])) - std::log(lambda - v->eval(0, 0.0)));
    EXPECT_LT(std::abs(psi0[i] - want), 1e-13) << nodes[i];
  }
}

TEST(Expansion, PsiOneMatchesDenseSimpson) {
  auto v = potential("poly_like", 2.0);
  const cplx lambda = 100.0;
  ExpansionConfig cfg;
  cfg.n = 3;
  cfg.base_point = 0.0;
  const double end = 3.0;
  const auto psi1 = cumulative_psi(*v, lambda, cfg, 1, {end});
  const TermSum integrand = gen_psi_prime(1, cfg.n);
  const int panels = 20000;
  const double h = end / panels;
  cplx acc = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * eval_termsum(integrand, *v, i * h, lambda);
  }
  acc *= h / 3.0;
  EXPECT_LT(std::abs(psi1[0] - acc), 1e-11 * std::max(1.0, std::abs(acc)));
}

TEST(Expansion, LogGDerivativeIsMinusPhiPrime) {
  auto v = potential("monomial_imag", 1.0);
  const double step = 1e-3;
  const PseudomodeGrid grid = uniform_grid(*v, 100.0, 2, -1.0, 1.0, step);
  std::vector<cplx> log_g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) log_g[i] = grid.log_g_hi[i] + grid.log_g_lo[i];
  for (std::size_t i = 2; i + 2 < grid.size(); i += 97) {
    const cplx want = -grid.phi_prime[i];
    EXPECT_LT(std::abs(diff4(log_g, i, step) - want), 1e-8 * std::abs(want)) << grid.nodes[i];
  }
}

TEST(Expansion, RemainderMatchesRiccatiDefect) {
  // -g'' + (V - lambda) g = (Phi'' - Phi'^2 + V - lambda) g, with Phi'' by finite differences.
  auto v = potential("monomial_imag", 1.0);
  const double lambda = 100.0, step = 1e-3;
  for (int n : {1, 2}) {
    const PseudomodeGrid grid = uniform_grid(*v, lambda, n, -1.0, 1.0, step);
    for (std::size_t i = 2; i + 2 < grid.size(); i += 101) {
      const cplx phi_p = grid.phi_prime[i];
      const cplx defect = diff4(grid.phi_prime, i, step) - phi_p * phi_p + v->eval(0, grid.nodes[i]) - lambda;
      EXPECT_LT(std::abs(defect - grid.remainder[i]), 1e-6 * std::abs(grid.remainder[i]) + 1e-11)
          << "n=" << n << " x=" << grid.nodes[i];
    }
  }
}

TEST(Expansion, ConstantPotentialHasNoRemainder) {
  Params p;
  p.scalars["re"] = 1.0;
  p.scalars["im"] = -2.0;
  auto v = make_builtin("constant", p);
  const PseudomodeGrid grid = uniform_grid(*v, 30.0, 3, -2.0, 2.0, 0.01);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(grid.remainder[i], cplx(0.0));
  // Exact WKB: Phi'^2 = V - lambda.
  const cplx phi_sq = grid.phi_prime[10] * grid.phi_prime[10];
  EXPECT_LT(std::abs(phi_sq - (cplx(1.0, -2.0) - 30.0)), 1e-12);
}

TEST(Expansion, PrincipalBranchRejectsCut) {
  EXPECT_THROW(principal_res_sqrt(cplx(-1.0, 0.0), cplx(0.0), 0.0), Error);
  const cplx r = principal_res_sqrt(cplx(4.0, 0.0), cplx(0.0, 3.0), 0.0);
  EXPECT_GE(r.real(), 0.0);
  EXPECT_LT(std::abs(r * r - cplx(4.0, -3.0)), 1e-14);
}

TEST(Expansion, GradedGridCoversCutoffAndIsSorted) {
  auto v = potential("poly_like", 2.0);
  const CutoffSpec spec = symmetric_cutoff(Regime::real_axis, 0.0, 6.0);
  ExpansionConfig cfg;
  const auto nodes = graded_grid(*v, 400.0, spec, cfg);
  ASSERT_GE(nodes.size(), static_cast<std::size_t>(cfg.min_nodes));
  EXPECT_LE(nodes.front(), spec.j_lo());
  EXPECT_GE(nodes.back(), spec.j_hi());
  for (std::size_t i = 1; i < nodes.size(); ++i) ASSERT_LT(nodes[i - 1], nodes[i]);
}

TEST(Expansion, ModeNamesRoundTrip) {
  for (ResidualMode m : {ResidualMode::plain, ResidualMode::ignore_w, ResidualMode::extra_term, ResidualMode::mollified})
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  EXPECT_THROW(parse_mode("fast"), Error);
}
