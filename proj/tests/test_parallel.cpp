#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "pseudomode/curves.hpp"
#include "pseudomode/parallel.hpp"

using namespace pm;

namespace {

PotentialPtr poly_like_square() {
  Params p;
  p.scalars["gamma"] = 2.0;
  return make_builtin("poly_like", p);
}

PseudomodeGrid assemble_with(ExecPolicy policy) {
  auto v = poly_like_square();
  const double lambda = 3e3;
  WidthOptions wo;
  wo.eps1 = 1.6;
  ExpansionConfig cfg;
  cfg.n = 3;
  cfg.policy = policy;
  return assemble(*v, lambda, cfg, widths_real_axis(*v, lambda, wo));
}

}  // namespace

TEST(Parallel, AssemblyIsBitIdentical) {
  omp_set_num_threads(4);
  const PseudomodeGrid serial = assemble_with(ExecPolicy::serial);
  const PseudomodeGrid parallel = assemble_with(ExecPolicy::parallel);
  ASSERT_EQ(serial.size(), parallel.size());
  EXPECT_EQ(serial.nodes, parallel.nodes);
  EXPECT_EQ(serial.log_g_hi, parallel.log_g_hi);
  EXPECT_EQ(serial.log_g_lo, parallel.log_g_lo);
  EXPECT_EQ(serial.remainder, parallel.remainder);
  EXPECT_EQ(serial.phi_prime, parallel.phi_prime);
  EXPECT_EQ(serial.xi_pp, parallel.xi_pp);
}

TEST(Parallel, ReportsAgreeToRounding) {
  const PseudomodeGrid grid = assemble_with(ExecPolicy::serial);
  const ResidualReport a = report(grid, ExecPolicy::serial);
  for (int threads : {1, 2, 5}) {
    omp_set_num_threads(threads);
    const ResidualReport b = report(grid, ExecPolicy::parallel);
    EXPECT_NEAR(a.log_ratio, b.log_ratio, 1e-12);
    EXPECT_NEAR(a.log_kappa, b.log_kappa, 1e-12);
    EXPECT_NEAR(a.log_sigma, b.log_sigma, 1e-12);
    EXPECT_NEAR(a.log_f_norm, b.log_f_norm, 1e-12);
  }
}

TEST(Parallel, ChunkedSumIsIndependentOfThreadCount) {
  auto term = [](std::size_t i) { return 1.0 / (1.0 + static_cast<double>(i)); };
  omp_set_num_threads(1);
  const double one = reduce_sum<double>(ExecPolicy::parallel, 100000, term);
  omp_set_num_threads(6);
  const double six = reduce_sum<double>(ExecPolicy::parallel, 100000, term);
  EXPECT_EQ(one, six);
  EXPECT_NEAR(one, reduce_sum<double>(ExecPolicy::serial, 100000, term), 1e-12);
  EXPECT_EQ(reduce_max(ExecPolicy::parallel, 1000, 0.0, [](std::size_t i) { return std::sin(0.1 * i); }),
            reduce_max(ExecPolicy::serial, 1000, 0.0, [](std::size_t i) { return std::sin(0.1 * i); }));
}

TEST(Parallel, WorkerExceptionsPropagate) {
  omp_set_num_threads(3);
  auto throwing = [](std::size_t i) {
    if (i == 17) throw std::runtime_error("boom");
  };
  EXPECT_THROW(for_each_index(ExecPolicy::parallel, 64, throwing), std::runtime_error);
  EXPECT_THROW(for_each_task(ExecPolicy::parallel, 64, throwing), std::runtime_error);
}

TEST(Parallel, PathSweepMatchesSerial) {
  omp_set_num_threads(3);
  auto v = poly_like_square();
  PathParams params;
  params.lo = 1e2;
  params.hi = 1e4;
  params.count = 5;
  params.widths.eps1 = 1.6;
  const LambdaPath path = make_path(Regime::real_axis, *v, params);
  SweepSetup setup;
  setup.potential = v;
  setup.cfg.n = 2;
  const auto serial = report_path(path, assemble_on_path(path, setup, ExecPolicy::serial), ExecPolicy::serial);
  const auto parallel = report_path(path, assemble_on_path(path, setup, ExecPolicy::parallel), ExecPolicy::parallel);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_NEAR(serial[i].log_ratio, parallel[i].log_ratio, 1e-12);
}
