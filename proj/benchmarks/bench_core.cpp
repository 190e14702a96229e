#include <benchmark/benchmark.h>

#include "hn/cocycle.hpp"
#include "hn/dynamics.hpp"
#include "hn/finite.hpp"

namespace {

const double kGolden = 0.6180339887498949;

void BM_PotentialSequence(benchmark::State& state) {
  hn::BaseSystem b = hn::BaseSystem::rotation(kGolden, 0.0);
  hn::Potential p = hn::Potential::cosine(1.0);
  std::vector<hn::cplx> buf(state.range(0));
  for (auto _ : state) {
    hn::potential_sequence(p, b, b.initial_phase, 0, buf.size(), buf.data());
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PotentialSequence)->Arg(1 << 12)->Arg(1 << 16);

void BM_TransferProduct(benchmark::State& state) {
  hn::BaseSystem b = hn::BaseSystem::rotation(kGolden, 0.0);
  hn::Potential p = hn::Potential::cosine(2.0);
  for (auto _ : state) {
    auto acc = hn::transfer_product(b, p, hn::cplx(0.5, 0.3), 0.4, b.initial_phase,
                                    state.range(0));
    benchmark::DoNotOptimize(acc.log_scale);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransferProduct)->Arg(1 << 12)->Arg(1 << 16);

void BM_Lyapunov(benchmark::State& state) {
  hn::BaseSystem b = hn::BaseSystem::rotation(kGolden, 0.0);
  hn::Potential p = hn::Potential::cosine(2.0);
  hn::LyapunovCfg cfg;
  cfg.n_steps = state.range(0);
  cfg.n_phases = 2;
  cfg.check_convergence = false;
  for (auto _ : state) {
    auto est = hn::lyapunov(b, p, hn::cplx(0.5, 0.3), 0.0, cfg);
    benchmark::DoNotOptimize(est.value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.n_phases);
}
BENCHMARK(BM_Lyapunov)->Arg(1 << 12)->Arg(1 << 14);

void BM_CharpolyEval(benchmark::State& state) {
  hn::BaseSystem b = hn::BaseSystem::rotation(kGolden, 0.0);
  hn::Potential p = hn::Potential::cosine(2.0);
  hn::FiniteOperator op = hn::build_operator(b, p, b.initial_phase, state.range(0), 0.5,
                                             hn::Boundary::periodic);
  for (auto _ : state) {
    auto cp = hn::charpoly_eval(op, hn::cplx(5.0, 1.0));
    benchmark::DoNotOptimize(cp.log_abs);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CharpolyEval)->Arg(1 << 10)->Arg(1 << 14);

void BM_DenseEig(benchmark::State& state) {
  hn::BaseSystem b = hn::BaseSystem::rotation(kGolden, 0.0);
  hn::Potential p = hn::Potential::cosine(2.0);
  hn::FiniteOperator op = hn::build_operator(b, p, b.initial_phase, state.range(0), 0.5,
                                             hn::Boundary::periodic);
  for (auto _ : state) {
    auto res = hn::eigenvalues(op);
    benchmark::DoNotOptimize(res.eigenvalues.data());
  }
}
BENCHMARK(BM_DenseEig)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
