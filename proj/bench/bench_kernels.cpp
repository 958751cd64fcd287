#include <benchmark/benchmark.h>

#include <cmath>

#include "pseudomode/curves.hpp"
#include "pseudomode/parallel.hpp"

using namespace pm;

namespace {

PotentialPtr poly_like_square() {
  Params p;
  p.scalars["gamma"] = 2.0;
  return make_builtin("poly_like", p);
}

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_GridAssembly(benchmark::State& state) {
  auto v = poly_like_square();
  const double lambda = 1e4;
  WidthOptions wo;
  wo.eps1 = 1.6;
  const CutoffSpec spec = widths_real_axis(*v, lambda, wo);
  ExpansionConfig cfg;
  cfg.n = 3;
  cfg.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(*v, lambda, cfg, spec));
  label(state);
}
BENCHMARK(BM_GridAssembly)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PathSweep(benchmark::State& state) {
  auto v = poly_like_square();
  PathParams params;
  params.lo = 1e2;
  params.hi = 1e5;
  params.count = 8;
  params.widths.eps1 = 1.6;
  const LambdaPath path = make_path(Regime::real_axis, *v, params);
  SweepSetup setup;
  setup.potential = v;
  setup.cfg.n = 2;
  setup.cfg.policy = ExecPolicy::serial;
  for (auto _ : state) {
    const auto grids = assemble_on_path(path, setup, policy_of(state));
    benchmark::DoNotOptimize(report_path(path, grids, policy_of(state)));
  }
  label(state);
}
BENCHMARK(BM_PathSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NormReduction(benchmark::State& state) {
  const std::size_t count = 1 << 20;
  std::vector<double> nodes(count), mag(count), log_scale(count);
  for (std::size_t i = 0; i < count; ++i) {
    nodes[i] = -10.0 + 20.0 * static_cast<double>(i) / (count - 1);
    mag[i] = 1.0 + 0.5 * std::sin(nodes[i]);
    log_scale[i] = -nodes[i] * nodes[i];
  }
  const std::vector<double> weights = simpson_weights(nodes);
  for (auto _ : state) benchmark::DoNotOptimize(log_l2_norm(nodes, weights, mag, log_scale, policy_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
  label(state);
}
BENCHMARK(BM_NormReduction)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
