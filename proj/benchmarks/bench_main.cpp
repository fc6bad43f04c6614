#include <benchmark/benchmark.h>

#include <random>

#include "regret_lab/corrector.hpp"
#include "regret_lab/game.hpp"
#include "regret_lab/strategy.hpp"

using namespace regret_lab;

namespace {

NodeFunction random_h(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  NodeFunction h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = dist(rng);
  return h;
}

void BM_SolvePoisson(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const LabeledDigraph g = debruijn(d);
  const NodeFunction h = random_h(g.node_count(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson(g, h));
}
// 10 uses the dense LU, 11 and up the iterative solver.
BENCHMARK(BM_SolvePoisson)->DenseRange(4, 12, 2)->Unit(benchmark::kMicrosecond);

void BM_Representation(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const NodeFunction h = random_h(std::size_t{1} << d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(debruijn_representation(h, d));
}
BENCHMARK(BM_Representation)->DenseRange(4, 16, 4)->Unit(benchmark::kMicrosecond);

void BM_SimpleCycles(benchmark::State& state) {
  const LabeledDigraph g = debruijn(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simple_cycles(g));
}
BENCHMARK(BM_SimpleCycles)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_VerifyIndifference(benchmark::State& state) {
  const LabeledDigraph g = debruijn(static_cast<int>(state.range(0)));
  const NodeFunction h = random_h(g.node_count(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(verify_indifference(g, h));
}
BENCHMARK(BM_VerifyIndifference)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

template <class MakePayoff>
void fstar_eval(benchmark::State& state, MakePayoff make) {
  const int d = static_cast<int>(state.range(0));
  const StrategyContext ctx(ExpertPanel::symmetric(d, 0.5), make(), 10'000);
  const MarketState m(d, 0);
  double x1 = 0.0;
  for (auto _ : state) {
    x1 += 1e-6;
    benchmark::DoNotOptimize(ctx.f_star(Regret{x1, 0.0}, 0.3, m));
  }
}
void BM_FStarMax(benchmark::State& state) { fstar_eval(state, [] { return Payoff::max(); }); }
void BM_FStarLogSumExp(benchmark::State& state) { fstar_eval(state, [] { return Payoff::log_sum_exp(); }); }
BENCHMARK(BM_FStarMax)->Arg(1)->Arg(4);
BENCHMARK(BM_FStarLogSumExp)->Arg(1)->Arg(4);

void BM_Simulate(benchmark::State& state) {
  const ExpertPanel panel = ExpertPanel::symmetric(2, 0.5);
  const long N = state.range(0);
  const GameConfig cfg = GameConfig::standard(panel, Payoff::max(), N);
  const StrategyContext ctx(panel, cfg.payoff, N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(cfg, fstar_investor(ctx), bstar_market(ctx), 1, false));
  }
  state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_Simulate)->Arg(1'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_ExactValue(benchmark::State& state) {
  const long N = state.range(0);
  const GameConfig cfg = GameConfig::standard(ExpertPanel::symmetric(1, 0.5), Payoff::max(), N);
  for (auto _ : state) benchmark::DoNotOptimize(exact_value(cfg, 11));
}
BENCHMARK(BM_ExactValue)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
