#include <benchmark/benchmark.h>

#include "qtran/ground_state.hpp"
#include "qtran/oracle.hpp"
#include "qtran/propagator.hpp"
#include "qtran/wbl.hpp"

using namespace qtran;

namespace {

BiasProfile right_step(double v) {
  BiasProfile b;
  b.right = LeadBias::smooth_step(v, 0.1);
  return b;
}

void BM_OscKernel(benchmark::State& state) {
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(osc_kernel(cplx(0.3, -0.2), 0.0, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_OscKernel);

void BM_KTerm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WblDissipator wbl(build_chain(n, 0.0, -0.5, 0.1, 0.1, 0.0), right_step(-1.0), InducedFockRule::half_sum());
  const WblState s = wbl.state_at(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(wbl.k_term(s, Lead::R));
}
BENCHMARK(BM_KTerm)->Arg(1)->Arg(4)->Arg(16);

void BM_PropagatorStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PropagatorOptions opt;
  opt.dt = 0.02;
  Propagator p(build_chain(n, 0.0, -0.5, 0.1, 0.1, 0.0), right_step(-1.0), InducedFockRule::half_sum(), opt);
  SimState s = p.initial_state();
  for (auto _ : state) {
    s = p.step(s, opt.dt);
    benchmark::DoNotOptimize(s.sigma.data());
  }
}
BENCHMARK(BM_PropagatorStep)->Arg(1)->Arg(4)->Arg(16);

void BM_GroundState(benchmark::State& state) {
  const DeviceModel m = build_chain(static_cast<int>(state.range(0)), 0.1, -0.5, 0.1, 0.1, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(ground_state_density(m));
}
BENCHMARK(BM_GroundState)->Arg(1)->Arg(8);

void BM_OracleRun(benchmark::State& state) {
  const DeviceModel m = build_single_site(0.0, 0.1, 0.1, 0.0);
  const int levels = static_cast<int>(state.range(0));
  const DiscretizedLead lead = discretize_lead(m.lambda_L, 10.0, levels);
  OracleOptions opt;
  opt.dt = 0.01;
  opt.t_end = 1.0;
  opt.decimation = 10;
  opt.tie = FermiTiePolicy::Half;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_full(m, lead, lead, right_step(-2.0), InducedFockRule::half_sum(), opt));
  }
}
BENCHMARK(BM_OracleRun)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
